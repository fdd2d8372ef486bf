//! The transducer data model and its word semantics.
//!
//! A [`Transducer`] is the quadruple `(S, s₀, t, o)`: states are dense
//! indices, `t` and `o` are stored together as one [`Edge`] per
//! `(state, bit)` pair. Values of this type are always complete and closed;
//! partially specified machines live in [`MachineDraft`] until validated.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::TransducerError;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(u32);

impl StateId {
    pub fn new(index: usize) -> Self {
        StateId(u32::try_from(index).expect("state index exceeds u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// One transition: read a bit, emit `out`, move to `to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub out: Word,
    pub to: StateId,
}

impl Edge {
    pub fn new(out: Word, to: StateId) -> Self {
        Edge { out, to }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transducer {
    initial: StateId,
    edges: Vec<[Edge; 2]>,
}

/// States visited, output emitted and the final state of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub visited: Vec<StateId>,
    pub emitted: Word,
    pub final_state: StateId,
}

/// A machine under construction. Any transition or output may be missing
/// and targets may dangle; [`MachineDraft::validate`] lists what is wrong.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MachineDraft {
    pub num_states: usize,
    pub initial: usize,
    /// `(target, output)` per state and bit.
    pub edges: Vec<[DraftEdge; 2]>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DraftEdge {
    pub to: Option<usize>,
    pub out: Option<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoStates,
    InitialOutOfRange {
        initial: usize,
    },
    MissingTransition {
        state: usize,
        bit: bool,
    },
    MissingOutput {
        state: usize,
        bit: bool,
    },
    DanglingTarget {
        state: usize,
        bit: bool,
        target: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |bit: &bool| if *bit { 1 } else { 0 };
        match self {
            Violation::NoStates => f.write_str("empty state set"),
            Violation::InitialOutOfRange { initial } => {
                write!(f, "initial state {initial} is not a state")
            }
            Violation::MissingTransition { state, bit } => {
                write!(f, "missing transition at state {state} on {}", b(bit))
            }
            Violation::MissingOutput { state, bit } => {
                write!(f, "missing output at state {state} on {}", b(bit))
            }
            Violation::DanglingTarget { state, bit, target } => write!(
                f,
                "transition at state {state} on {} targets nonexistent state {target}",
                b(bit)
            ),
        }
    }
}

impl MachineDraft {
    pub fn new(num_states: usize, initial: usize) -> Self {
        MachineDraft {
            num_states,
            initial,
            edges: vec![Default::default(); num_states],
        }
    }

    pub fn set(&mut self, state: usize, bit: bool, out: Word, to: usize) {
        self.edges[state][bit as usize] = DraftEdge {
            to: Some(to),
            out: Some(out),
        };
    }

    /// Every broken invariant, in state order. Empty iff the draft is a
    /// complete, closed transducer.
    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.num_states == 0 {
            v.push(Violation::NoStates);
        }
        if self.initial >= self.num_states && self.num_states > 0 {
            v.push(Violation::InitialOutOfRange {
                initial: self.initial,
            });
        }
        for state in 0..self.num_states {
            for bit in [false, true] {
                let e = self.edges.get(state).map(|e| &e[bit as usize]);
                match e.and_then(|e| e.to) {
                    None => v.push(Violation::MissingTransition { state, bit }),
                    Some(target) if target >= self.num_states => {
                        v.push(Violation::DanglingTarget { state, bit, target })
                    }
                    Some(_) => {}
                }
                if e.and_then(|e| e.out.as_ref()).is_none() {
                    v.push(Violation::MissingOutput { state, bit });
                }
            }
        }
        v
    }

    pub fn build(self) -> Result<Transducer, TransducerError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(TransducerError::Invalid(violations));
        }
        let edges = self
            .edges
            .into_iter()
            .take(self.num_states)
            .map(|[a, b]| {
                let mk = |e: DraftEdge| Edge::new(e.out.unwrap(), StateId::new(e.to.unwrap()));
                [mk(a), mk(b)]
            })
            .collect();
        Ok(Transducer {
            initial: StateId::new(self.initial),
            edges,
        })
    }
}

impl From<&Transducer> for MachineDraft {
    fn from(t: &Transducer) -> Self {
        let edges = t
            .edges
            .iter()
            .map(|pair| {
                pair.clone().map(|e| DraftEdge {
                    to: Some(e.to.index()),
                    out: Some(e.out),
                })
            })
            .collect();
        MachineDraft {
            num_states: t.num_states(),
            initial: t.initial.index(),
            edges,
        }
    }
}

impl Transducer {
    /// Builds a machine from per-state `[edge on 0, edge on 1]` pairs.
    pub fn from_edges(initial: StateId, edges: Vec<[Edge; 2]>) -> Result<Self, TransducerError> {
        let t = Transducer { initial, edges };
        let v = MachineDraft::from(&t).validate();
        if v.is_empty() {
            Ok(t)
        } else {
            Err(TransducerError::Invalid(v))
        }
    }

    /// Same as [`Transducer::from_edges`] for inputs known to be closed.
    pub(crate) fn from_edges_unchecked(initial: StateId, edges: Vec<[Edge; 2]>) -> Self {
        debug_assert!(initial.index() < edges.len());
        debug_assert!(edges.iter().flatten().all(|e| e.to.index() < edges.len()));
        Transducer { initial, edges }
    }

    /// The one-state copy machine.
    pub fn identity() -> Self {
        let q = StateId::new(0);
        Transducer {
            initial: q,
            edges: vec![[
                Edge::new(Word::bit(false), q),
                Edge::new(Word::bit(true), q),
            ]],
        }
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.edges.len()).map(StateId::new)
    }

    pub fn edge(&self, s: StateId, bit: bool) -> &Edge {
        &self.edges[s.index()][bit as usize]
    }

    pub fn edges_of(&self, s: StateId) -> &[Edge; 2] {
        &self.edges[s.index()]
    }

    pub fn next(&self, s: StateId, bit: bool) -> StateId {
        self.edge(s, bit).to
    }

    pub fn output(&self, s: StateId, bit: bool) -> &Word {
        &self.edge(s, bit).out
    }

    pub fn contains(&self, s: StateId) -> bool {
        s.index() < self.edges.len()
    }

    /// The same machine started from `s`.
    pub fn rerooted(&self, s: StateId) -> Result<Self, TransducerError> {
        if !self.contains(s) {
            return Err(TransducerError::UnknownState(s.index()));
        }
        Ok(Transducer {
            initial: s,
            edges: self.edges.clone(),
        })
    }

    /// Longest single-step output.
    pub fn max_output_len(&self) -> usize {
        self.edges
            .iter()
            .flatten()
            .map(|e| e.out.len())
            .max()
            .unwrap_or(0)
    }

    /// `(o(s,w), t(s,w))` without recording the visited states.
    pub fn step_word(&self, s: StateId, w: &[bool]) -> (Word, StateId) {
        let mut out = Word::empty();
        let mut cur = s;
        for &b in w {
            let e = self.edge(cur, b);
            out.extend_from(&e.out);
            cur = e.to;
        }
        (out, cur)
    }

    /// Runs the machine from `s` on `w`.
    pub fn run(&self, s: StateId, w: &Word) -> Result<Trajectory, TransducerError> {
        if !self.contains(s) {
            return Err(TransducerError::UnknownState(s.index()));
        }
        let mut visited = Vec::with_capacity(w.len() + 1);
        visited.push(s);
        let mut emitted = Word::empty();
        let mut cur = s;
        for &b in w.iter() {
            let e = self.edge(cur, b);
            emitted.extend_from(&e.out);
            cur = e.to;
            visited.push(cur);
        }
        Ok(Trajectory {
            visited,
            emitted,
            final_state: cur,
        })
    }

    /// `o(s₀, w)`: a prefix of `f(wζ)` for every infinite `ζ`.
    pub fn eval_prefix(&self, w: &Word) -> Word {
        self.step_word(self.initial, w).0
    }

    /// States in breadth-first order from the initial state (bit 0 first).
    pub fn bfs_order(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial.index()] = true;
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for e in self.edges_of(s) {
                if !seen[e.to.index()] {
                    seen[e.to.index()] = true;
                    queue.push_back(e.to);
                }
            }
        }
        order
    }

    /// Renumbers states so that `order[i]` becomes state `i`; states not in
    /// `order` are dropped. `order` must be closed under transitions and
    /// contain the initial state.
    pub(crate) fn renumbered(&self, order: &[StateId]) -> Transducer {
        let mut map = vec![usize::MAX; self.num_states()];
        for (i, s) in order.iter().enumerate() {
            map[s.index()] = i;
        }
        let edges = order
            .iter()
            .map(|&s| {
                self.edges_of(s)
                    .clone()
                    .map(|e| Edge::new(e.out, StateId::new(map[e.to.index()])))
            })
            .collect();
        Transducer::from_edges_unchecked(StateId::new(map[self.initial.index()]), edges)
    }

    /// Rooted isomorphism: a simultaneous traversal from both initial states
    /// that matches outputs exactly and pairs states bijectively. Both
    /// machines must also have the same number of states, so unreachable
    /// states are counted but not matched.
    pub fn is_isomorphic(&self, other: &Transducer) -> bool {
        if self.num_states() != other.num_states() {
            return false;
        }
        let n = self.num_states();
        let mut fwd = vec![usize::MAX; n];
        let mut bwd = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        fwd[self.initial.index()] = other.initial.index();
        bwd[other.initial.index()] = self.initial.index();
        queue.push_back((self.initial, other.initial));
        while let Some((a, b)) = queue.pop_front() {
            for bit in [false, true] {
                let (ea, eb) = (self.edge(a, bit), other.edge(b, bit));
                if ea.out != eb.out {
                    return false;
                }
                let (ta, tb) = (ea.to.index(), eb.to.index());
                match (fwd[ta], bwd[tb]) {
                    (usize::MAX, usize::MAX) => {
                        fwd[ta] = tb;
                        bwd[tb] = ta;
                        queue.push_back((ea.to, eb.to));
                    }
                    (x, y) if x == tb && y == ta => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    /// The two-state example machine with outputs ε, 11 at s₀ and 0, 10 at s₁.
    pub(crate) fn two_state() -> Transducer {
        let (s0, s1) = (StateId::new(0), StateId::new(1));
        Transducer::from_edges(
            s0,
            vec![
                [Edge::new(w(""), s1), Edge::new(w("11"), s0)],
                [Edge::new(w("0"), s0), Edge::new(w("10"), s0)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn validate_accepts_complete_machines() {
        assert!(MachineDraft::from(&two_state()).validate().is_empty());
        assert!(MachineDraft::from(&Transducer::identity())
            .validate()
            .is_empty());
    }

    #[test]
    fn validate_reports_missing_transition() {
        let mut d = MachineDraft::from(&two_state());
        d.edges[1][1] = DraftEdge::default();
        let v = d.validate();
        assert!(v.contains(&Violation::MissingTransition {
            state: 1,
            bit: true
        }));
        assert!(v.contains(&Violation::MissingOutput {
            state: 1,
            bit: true
        }));
        assert!(d.build().is_err());
    }

    #[test]
    fn validate_reports_dangling_and_empty() {
        let mut d = MachineDraft::new(1, 0);
        d.set(0, false, w("0"), 0);
        d.set(0, true, w("1"), 3);
        assert_eq!(
            d.validate(),
            vec![Violation::DanglingTarget {
                state: 0,
                bit: true,
                target: 3
            }]
        );
        assert_eq!(
            MachineDraft::new(0, 0).validate(),
            vec![Violation::NoStates]
        );
        let mut d = MachineDraft::new(1, 4);
        d.set(0, false, w("0"), 0);
        d.set(0, true, w("1"), 0);
        assert_eq!(
            d.validate(),
            vec![Violation::InitialOutOfRange { initial: 4 }]
        );
    }

    #[test]
    fn run_two_state() {
        let t = two_state();
        let r = t.run(t.initial(), &w("01")).unwrap();
        assert_eq!(r.emitted, w("10"));
        assert_eq!(r.final_state, StateId::new(0));
        assert_eq!(
            r.visited,
            vec![StateId::new(0), StateId::new(1), StateId::new(0)]
        );
        assert_eq!(t.eval_prefix(&w("1")), w("11"));
    }

    #[test]
    fn run_on_empty_word() {
        let t = two_state();
        let s1 = StateId::new(1);
        let r = t.run(s1, &Word::empty()).unwrap();
        assert_eq!(r.visited, vec![s1]);
        assert!(r.emitted.is_empty());
        assert_eq!(r.final_state, s1);
        assert_eq!(
            t.run(StateId::new(7), &w("0")),
            Err(TransducerError::UnknownState(7))
        );
    }

    #[test]
    fn identity_copies() {
        assert_eq!(Transducer::identity().eval_prefix(&w("0110")), w("0110"));
    }

    #[test]
    fn isomorphism_modulo_renaming() {
        let t = two_state();
        let swapped = t.renumbered(&[StateId::new(1), StateId::new(0)]);
        assert_ne!(t, swapped);
        assert!(t.is_isomorphic(&swapped));
        assert!(!t.is_isomorphic(&Transducer::identity()));
    }
}
