use alloc::string::String;
use alloc::vec::Vec;

use crate::code::CodeError;
use crate::transducer::{StateId, Violation};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransducerError {
    #[error("unknown state id {0}")]
    UnknownState(usize),
    #[error("invalid transducer: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str("; ");
        }
        let _ = write!(s, "{x}");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    /// The common output prefix from `state` grew past `bound` without
    /// stabilizing: some accessible behaviour is constant along a cycle, so
    /// the machine does not induce an injective map.
    #[error(
        "common output prefix from state {state} exceeds {bound} symbols: machine is not injective"
    )]
    Divergence { state: StateId, bound: usize },
    /// Every surjection of the Cantor set has an empty common output prefix
    /// at the root; this machine prepends `residue` to every output.
    #[error("initial state has nonempty common output prefix {residue}: map is not surjective")]
    InitialResidue { residue: Word },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ElementError {
    #[error("element has no inverse machine (raw machine supplied without inverse): not invertible structurally")]
    NotInvertible,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error("cone image of {cone} did not resolve within {depth} symbols")]
    ImageUnresolved { cone: Word, depth: usize },
    #[error("image cone {image} meets support cone {cone}: f(E) is not disjoint from E")]
    NotDisjoint { cone: Word, image: Word },
    #[error("invalid clopen set {which}: {reason}")]
    ClopenSet {
        which: &'static str,
        reason: &'static str,
    },
    #[error("glued pieces do not map onto a partition of the Cantor set")]
    NotBijective,
}
