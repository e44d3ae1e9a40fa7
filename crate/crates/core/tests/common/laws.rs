//! Adjunction and kernel laws checked over given element lists.

use epiq_core::algebra::{AtomSet, AtomicSystem, EpistemicAlgebra, Enumerate};
use rand::seq::SliceRandom;
use rand::Rng;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// All four residuation pairs, both appearance/box pairs, the kernel
/// downset and the preservation laws, for every pair drawn from `ms`, `qs`.
pub fn check_laws<S: EpistemicAlgebra>(sys: &S, ms: &[S::M], qs: &[S::Q]) -> Result<(), String> {
    let ml = |m: &S::M| sys.m_label(m);
    let ql = |q: &S::Q| sys.q_label(q);
    for q in qs {
        let ker = sys.kernel_generator(q);
        ensure(sys.dyn_box(q, &sys.m_bottom()) == ker, || format!("[{}]bot", ql(q)))?;
        ensure(sys.dyn_box(q, &sys.m_top()) == sys.m_top(), || format!("[{}]top", ql(q)))?;
        for m in ms {
            let killed = sys.update(m, q) == sys.m_bottom();
            ensure(killed == sys.m_leq(m, &ker), || format!("kernel of {} at {}", ql(q), ml(m)))?;
            for m2 in ms {
                let under = sys.m_leq(&sys.update(m, q), m2);
                ensure(under == sys.m_leq(m, &sys.dyn_box(q, m2)), || {
                    format!("update/dynamic box at {}, {}, {}", ml(m), ql(q), ml(m2))
                })?;
                ensure(under == sys.q_leq(q, &sys.co_residual(m, m2)), || {
                    format!("update/co-residual at {}, {}, {}", ml(m), ql(q), ml(m2))
                })?;
                ensure(
                    sys.dyn_box(q, &sys.m_meet(m, m2)) == sys.m_meet(&sys.dyn_box(q, m), &sys.dyn_box(q, m2)),
                    || format!("dynamic box meets at {}, {}, {}", ql(q), ml(m), ml(m2)),
                )?;
                ensure(
                    sys.update(&sys.m_join(m, m2), q) == sys.m_join(&sys.update(m, q), &sys.update(m2, q)),
                    || format!("update joins at {}, {}, {}", ml(m), ml(m2), ql(q)),
                )?;
            }
        }
        for a in qs {
            for b in qs {
                let left = sys.q_leq(&sys.mult(a, q), b);
                ensure(left == sys.q_leq(q, &sys.left_residual(a, b)), || {
                    format!("left residual at {}, {}, {}", ql(a), ql(q), ql(b))
                })?;
                let right = sys.q_leq(&sys.mult(q, a), b);
                ensure(right == sys.q_leq(q, &sys.right_residual(b, a)), || {
                    format!("right residual at {}, {}, {}", ql(q), ql(a), ql(b))
                })?;
            }
        }
    }
    for i in 0..sys.agents().len() {
        ensure(sys.box_m(i, &sys.m_top()) == sys.m_top(), || format!("box {i} top"))?;
        ensure(sys.box_q(i, &sys.q_top()) == sys.q_top(), || format!("action box {i} top"))?;
        for m in ms {
            for m2 in ms {
                ensure(
                    sys.m_leq(&sys.app_m(i, m), m2) == sys.m_leq(m, &sys.box_m(i, m2)),
                    || format!("appearance/box {i} at {}, {}", ml(m), ml(m2)),
                )?;
                ensure(
                    sys.box_m(i, &sys.m_meet(m, m2)) == sys.m_meet(&sys.box_m(i, m), &sys.box_m(i, m2)),
                    || format!("box {i} meets at {}, {}", ml(m), ml(m2)),
                )?;
                if sys.m_leq(m, m2) {
                    ensure(sys.m_leq(&sys.box_m(i, m), &sys.box_m(i, m2)), || format!("box {i} monotone"))?;
                }
            }
        }
        for a in qs {
            for b in qs {
                ensure(
                    sys.q_leq(&sys.app_q(i, a), b) == sys.q_leq(a, &sys.box_q(i, b)),
                    || format!("action appearance/box {i} at {}, {}", ql(a), ql(b)),
                )?;
                ensure(
                    sys.box_q(i, &sys.q_meet(a, b)) == sys.q_meet(&sys.box_q(i, a), &sys.box_q(i, b)),
                    || format!("action box {i} meets at {}, {}", ql(a), ql(b)),
                )?;
            }
        }
    }
    Ok(())
}

/// Every element when the carriers are small.
pub fn check_laws_exhaustive<S: Enumerate>(sys: &S) -> Result<(), String> {
    check_laws(sys, &sys.m_elements(), &sys.q_elements())
}

/// Largest atom count per carrier that is enumerated in full.
pub const EXHAUSTIVE_ATOMS: usize = 5;

/// Elements to test on an atomic system: all of them up to
/// [`EXHAUSTIVE_ATOMS`] atoms, otherwise bottom, top, every atom, every
/// coatom and `extra` random subsets.
pub fn sample_elements<R: Rng>(rng: &mut R, sys: &AtomicSystem, extra: usize) -> (Vec<AtomSet>, Vec<AtomSet>) {
    let side = |rng: &mut R, n: usize, all: Vec<AtomSet>| {
        if n <= EXHAUSTIVE_ATOMS {
            return all;
        }
        let mut out = Vec::new();
        let mut empty = AtomSet::with_capacity(n);
        out.push(empty.clone());
        empty.insert_range(..);
        out.push(empty.clone());
        for i in 0..n {
            let mut a = AtomSet::with_capacity(n);
            a.insert(i);
            out.push(a);
            let mut co = empty.clone();
            co.set(i, false);
            out.push(co);
        }
        let idx: Vec<usize> = (0..n).collect();
        for _ in 0..extra {
            let k = rng.gen_range(0..=n);
            let mut s = AtomSet::with_capacity(n);
            s.extend(idx.choose_multiple(rng, k).copied());
            out.push(s);
        }
        out
    };
    let nm = sys.m_atoms().len();
    let nq = sys.q_atoms().len();
    let ms = if nm <= EXHAUSTIVE_ATOMS { sys.m_elements() } else { Vec::new() };
    let qs = if nq <= EXHAUSTIVE_ATOMS { sys.q_elements() } else { Vec::new() };
    (side(rng, nm, ms), side(rng, nq, qs))
}
