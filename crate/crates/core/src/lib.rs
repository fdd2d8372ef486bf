//! Asynchronous binary transducers and the rational homeomorphisms of the
//! Cantor set `{0,1}^ω` they induce.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`Transducer`]: complete deterministic binary machines with word-valued
//!   outputs, and their evaluation on finite words ([`word`], [`transducer`]);
//! * canonical forms: onward (earliest-output) form, trimming, minimization,
//!   equality of induced maps and restrictions to cones ([`normalize`]);
//! * machine-level constructions such as pairing, the Hilbert-hotel fixed
//!   point, products and prefix exchanges ([`construct`], [`code`]);
//! * group elements with structurally maintained inverses ([`element`]);
//! * cycle structure: SCC periods, obliviousness to a prime, output/length
//!   ratios of cycles ([`cycles`]).
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod code;
pub mod construct;
pub mod cycles;
pub mod element;
mod error;
pub mod normalize;
pub mod transducer;
pub mod word;

pub use code::{CodeError, ExchangeTable};
pub use cycles::{
    accessible_states, analyze_cycles, is_oblivious, is_prime, lipschitz_report, CycleReport,
    LipschitzReport, Ratio, SccSummary,
};
pub use element::{Element, Expr, Factorization};
pub use error::{ElementError, NormalizeError, TransducerError};
pub use normalize::{
    equal, lcp_from_state, make_onward, minimize, num_restrictions, restriction, trim,
    CanonicalForm, RestrictionResult,
};
pub use transducer::{Edge, MachineDraft, StateId, Trajectory, Transducer, Violation};
pub use word::Word;
