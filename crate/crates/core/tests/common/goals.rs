//! Search regression goals.

use epiq_core::syntax::Signature;

pub fn regression_signature() -> Signature {
    Signature::new(["A", "B"], ["q", "q1", "q2", "q1'", "q2'"], ["m", "m'"], ["p"])
}

/// Derivations showing that the operators respect provable entailment and
/// that appearance is left adjoint to the action box.
pub const WELL_DEFINEDNESS: [(&str, &[&str]); 8] = [
    ("fQ[A](q1 | q2) |-Q fQ[A](q1) | fQ[A](q2)", &[]),
    ("fQ[A](q1) | fQ[A](q2) |-Q fQ[A](q1 | q2)", &[]),
    ("fQ[A](q1) |-Q fQ[A](q1')", &["q1 |-Q q1'"]),
    ("boxQ[A](q1) |-Q boxQ[A](q1')", &["q1 |-Q q1'"]),
    ("fQ[A](q1) |-Q q2", &["q1 |-Q boxQ[A](q2)"]),
    ("q1 |-Q boxQ[A](q2)", &["fQ[A](q1) |-Q q2"]),
    ("m . q1 |-M m' . q1'", &["m |-M m'", "q1 |-Q q1'"]),
    ("boxM[A](m) |-M boxM[A](m')", &["m |-M m'"]),
];

