//! Formulas and sequents: abstract syntax, concrete grammar and semantics.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sequent := [item {"," item}] ("|-Q" | "|-M") [formula]
//! item    := "@" AGENT | formula [":" ("Q" | "M")]
//! formula := formula ("\" | "/") or      | or
//! or      := or "|" and                  | and
//! and     := and "&" mul                 | mul
//! mul     := mul ("*" | ".") unary       | unary
//! unary   := ("fQ" | "fM" | "boxQ" | "boxM") "[" AGENT "]" "(" formula ")"
//!          | "[" formula "]" unary | atom
//! atom    := "top" | "bot" | "1" | "#" FACT | NAME | "(" formula ")"
//! ```
//!
//! Items built only from `top`, `bot`, `|` and `&` take the sort of the
//! turnstile unless ascribed.

mod ast;
mod parse;
mod print;
mod semantics;

pub use ast::{name, Conclusion, Item, MFormula, Name, QFormula, Sequent, Side};
pub use parse::{parse_m, parse_q, parse_sequent, Signature, SyntaxError};
pub use semantics::{BindingsDoc, Environment, SemanticError};
