//! Canonical forms of rational homeomorphisms.
//!
//! The pipeline is trim → onward → merge. A machine is *onward* when at
//! every state the outputs of all infinite inputs share no common prefix;
//! then `o(s₀, α)` is exactly the common prefix of `f(I_α)` and each state
//! realizes one restriction `f|_α`. Merging behaviourally equivalent states
//! of an onward machine leaves one state per distinct restriction, which is
//! the canonical transducer of the map.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::code;
use crate::error::NormalizeError;
use crate::transducer::{Edge, StateId, Transducer};
use crate::word::Word;

/// A trimmed, onward, minimal transducer in breadth-first state order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    machine: Transducer,
}

impl CanonicalForm {
    pub fn machine(&self) -> &Transducer {
        &self.machine
    }

    pub fn into_machine(self) -> Transducer {
        self.machine
    }

    /// Number of distinct restrictions of the induced map.
    pub fn restriction_count(&self) -> usize {
        self.machine.num_states()
    }
}

/// `f(αω) = prefix_out · f|_α(ω)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionResult {
    pub prefix_out: Word,
    pub machine: CanonicalForm,
}

/// Residue bound used when none is given: `|S|·(1 + max |o(s,σ)|) + 1`.
pub fn default_bound(t: &Transducer) -> usize {
    t.num_states() * (1 + t.max_output_len()) + 1
}

/// Length of the common prefix of `a·b` and `c·d`.
fn lcp_len_concat(a: &Word, b: &Word, c: &Word, d: &Word) -> usize {
    a.iter()
        .chain(b.iter())
        .zip(c.iter().chain(d.iter()))
        .take_while(|(x, y)| x == y)
        .count()
}

/// Least fixpoint of `L(s) = lcp(o(s,0)·L(t(s,0)), o(s,1)·L(t(s,1)))` over
/// the states flagged in `live` (a set closed under transitions).
fn residues_on(t: &Transducer, live: &[bool], bound: usize) -> Result<Vec<Word>, NormalizeError> {
    let mut res = vec![Word::empty(); t.num_states()];
    loop {
        let mut changed = false;
        for s in t.states().filter(|s| live[s.index()]) {
            let [e0, e1] = t.edges_of(s);
            let (l0, l1) = (&res[e0.to.index()], &res[e1.to.index()]);
            let n = lcp_len_concat(&e0.out, l0, &e1.out, l1);
            if n > res[s.index()].len() {
                if n > bound {
                    return Err(NormalizeError::Divergence { state: s, bound });
                }
                res[s.index()] = e0.out.concat(l0).truncated(n);
                changed = true;
            }
        }
        if !changed {
            return Ok(res);
        }
    }
}

fn reachable_from(t: &Transducer, s: StateId) -> Vec<bool> {
    let mut seen = vec![false; t.num_states()];
    let mut stack = vec![s];
    seen[s.index()] = true;
    while let Some(x) = stack.pop() {
        for e in t.edges_of(x) {
            if !seen[e.to.index()] {
                seen[e.to.index()] = true;
                stack.push(e.to);
            }
        }
    }
    seen
}

/// `L(s)`: the longest common prefix of `o(s, ψ)` over all infinite `ψ`.
///
/// Fails with [`NormalizeError::Divergence`] once some residue reachable
/// from `s` grows past `bound`.
pub fn lcp_from_state(t: &Transducer, s: StateId, bound: usize) -> Result<Word, NormalizeError> {
    assert!(t.contains(s), "state {s} is not in the machine");
    let live = reachable_from(t, s);
    let res = residues_on(t, &live, bound)?;
    Ok(res[s.index()].clone())
}

/// Residues of every state of `t` (all states must be well behaved).
pub fn residues(t: &Transducer, bound: usize) -> Result<Vec<Word>, NormalizeError> {
    residues_on(t, &vec![true; t.num_states()], bound)
}

/// Drops states not reachable from the initial state and numbers the rest
/// in breadth-first order.
pub fn trim(t: &Transducer) -> Transducer {
    t.renumbered(&t.bfs_order())
}

/// Trims `t` and rewrites outputs as `o'(s,σ) = L(s)⁻¹·o(s,σ)·L(t(s,σ))`
/// so that every state is onward. The induced map is unchanged.
pub fn make_onward(t: &Transducer) -> Result<Transducer, NormalizeError> {
    let t = trim(t);
    let res = residues(&t, default_bound(&t))?;
    let root = &res[t.initial().index()];
    if !root.is_empty() {
        return Err(NormalizeError::InitialResidue {
            residue: root.clone(),
        });
    }
    let edges = t
        .states()
        .map(|s| {
            let head = res[s.index()].len();
            t.edges_of(s).clone().map(|e| {
                let full = e.out.concat(&res[e.to.index()]);
                Edge::new(full.suffix_from(head), e.to)
            })
        })
        .collect();
    Ok(Transducer::from_edges_unchecked(t.initial(), edges))
}

/// Moore-style partition refinement on an onward machine. Classes start
/// from the pair of one-step outputs and split on successor classes until
/// stable; ids are assigned in state order, so the result is reproducible.
fn refine(t: &Transducer) -> Vec<usize> {
    let mut keys: BTreeMap<(&Word, &Word), usize> = BTreeMap::new();
    let mut class: Vec<usize> = t
        .states()
        .map(|s| {
            let k = (t.output(s, false), t.output(s, true));
            let next = keys.len();
            *keys.entry(k).or_insert(next)
        })
        .collect();
    let mut count = keys.len();
    loop {
        let mut sigs: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        let next_class: Vec<usize> = t
            .states()
            .map(|s| {
                let sig = (
                    class[s.index()],
                    class[t.next(s, false).index()],
                    class[t.next(s, true).index()],
                );
                let next = sigs.len();
                *sigs.entry(sig).or_insert(next)
            })
            .collect();
        let next_count = sigs.len();
        class = next_class;
        if next_count == count {
            return class;
        }
        count = next_count;
    }
}

/// The canonical transducer of the map induced by `t`.
pub fn minimize(t: &Transducer) -> Result<CanonicalForm, NormalizeError> {
    let onward = make_onward(t)?;
    let class = refine(&onward);
    let classes = class.iter().copied().max().map_or(0, |m| m + 1);
    let mut rep = vec![None; classes];
    for s in onward.states() {
        rep[class[s.index()]].get_or_insert(s);
    }
    let edges = rep
        .iter()
        .map(|r| {
            let s = r.expect("every class has a member");
            onward
                .edges_of(s)
                .clone()
                .map(|e| Edge::new(e.out, StateId::new(class[e.to.index()])))
        })
        .collect();
    let quotient =
        Transducer::from_edges_unchecked(StateId::new(class[onward.initial().index()]), edges);
    Ok(CanonicalForm {
        machine: trim(&quotient),
    })
}

/// Whether `a` and `b` induce the same map of the Cantor set.
pub fn equal(a: &Transducer, b: &Transducer) -> Result<bool, NormalizeError> {
    let (ca, cb) = (minimize(a)?, minimize(b)?);
    Ok(ca.machine.is_isomorphic(&cb.machine))
}

/// The restriction `f|_α` together with `β`, the common prefix of `f(I_α)`.
pub fn restriction(t: &Transducer, alpha: &Word) -> Result<RestrictionResult, NormalizeError> {
    let c = minimize(t)?;
    let (prefix_out, state) = c.machine.step_word(c.machine.initial(), alpha);
    let rerooted = c
        .machine
        .rerooted(state)
        .expect("state reached by a run exists");
    Ok(RestrictionResult {
        prefix_out,
        machine: minimize(&rerooted)?,
    })
}

pub fn num_restrictions(t: &Transducer) -> Result<usize, NormalizeError> {
    Ok(minimize(t)?.restriction_count())
}

/// Outcome of [`bijectivity_probe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BijectivityProbe {
    /// The common-prefix cones of `f(I_w)`, `|w| = depth`, are pairwise
    /// disjoint.
    pub disjoint: bool,
    /// Those cones cover the whole space.
    pub covering: bool,
}

impl BijectivityProbe {
    pub fn passed(&self) -> bool {
        self.disjoint && self.covering
    }
}

/// Bounded-depth evidence that `t` induces a bijection. A pass is strong
/// evidence, not a proof; a homeomorphism may need a larger depth to pass.
pub fn bijectivity_probe(t: &Transducer, depth: usize) -> Result<BijectivityProbe, NormalizeError> {
    let c = minimize(t)?;
    let mut cones: Vec<Word> = Word::all_of_length(depth)
        .map(|w| c.machine.eval_prefix(&w))
        .collect();
    cones.sort();
    let disjoint = cones.windows(2).all(|p| !p[0].comparable(&p[1]));
    let covering = disjoint && code::is_complete_code(&cones);
    Ok(BijectivityProbe { disjoint, covering })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transducer::tests::{two_state, w};

    fn one_state(o0: &str, o1: &str) -> Transducer {
        let q = StateId::new(0);
        Transducer::from_edges(q, vec![[Edge::new(w(o0), q), Edge::new(w(o1), q)]]).unwrap()
    }

    /// Root emitting `0`/`1` into the one-state machine 0→10, 1→11.
    fn delayed() -> Transducer {
        let (r, q) = (StateId::new(0), StateId::new(1));
        Transducer::from_edges(
            r,
            vec![
                [Edge::new(w("0"), q), Edge::new(w("1"), q)],
                [Edge::new(w("10"), q), Edge::new(w("11"), q)],
            ],
        )
        .unwrap()
    }

    fn fp(p: usize) -> Transducer {
        crate::construct::fp_machine(p)
    }

    #[test]
    fn residue_examples() {
        let t = two_state();
        assert_eq!(lcp_from_state(&t, StateId::new(1), 100).unwrap(), w(""));
        let q = one_state("10", "11");
        assert_eq!(lcp_from_state(&q, q.initial(), 100).unwrap(), w("1"));
        let id = Transducer::identity();
        assert_eq!(lcp_from_state(&id, id.initial(), 100).unwrap(), w(""));
    }

    #[test]
    fn constant_map_diverges() {
        let c = one_state("0", "0");
        let err = lcp_from_state(&c, c.initial(), default_bound(&c)).unwrap_err();
        assert!(matches!(err, NormalizeError::Divergence { .. }));
        assert!(minimize(&c).is_err());
    }

    #[test]
    fn onward_examples() {
        assert_eq!(make_onward(&two_state()).unwrap(), two_state());
        assert_eq!(
            make_onward(&Transducer::identity()).unwrap(),
            Transducer::identity()
        );
        let on = make_onward(&delayed()).unwrap();
        assert_eq!(on.output(on.initial(), false), &w("01"));
        assert_eq!(on.output(on.initial(), true), &w("11"));
        let q = StateId::new(1);
        assert_eq!(on.output(q, false), &w("01"));
        assert_eq!(on.output(q, true), &w("11"));
    }

    #[test]
    fn nonempty_root_residue_is_an_error() {
        let q = one_state("10", "11");
        assert_eq!(
            make_onward(&q),
            Err(NormalizeError::InitialResidue { residue: w("1") })
        );
    }

    #[test]
    fn trim_removes_orphans() {
        let mut d = crate::MachineDraft::from(&two_state());
        d.num_states = 3;
        d.edges.push(Default::default());
        d.set(2, false, w("1"), 0);
        d.set(2, true, w("0"), 2);
        let t = d.build().unwrap();
        assert_eq!(trim(&t), two_state());
        assert_eq!(trim(&two_state()), two_state());
    }

    #[test]
    fn minimize_examples() {
        assert_eq!(minimize(&fp(3)).unwrap().restriction_count(), 3);
        assert_eq!(num_restrictions(&fp(5)).unwrap(), 5);
        assert_eq!(num_restrictions(&two_state()).unwrap(), 2);
        assert_eq!(num_restrictions(&Transducer::identity()).unwrap(), 1);
        // Two copies of the copy state hanging off a root.
        let (r, a, b) = (StateId::new(0), StateId::new(1), StateId::new(2));
        let t = Transducer::from_edges(
            r,
            vec![
                [Edge::new(w("0"), a), Edge::new(w("1"), b)],
                [Edge::new(w("0"), a), Edge::new(w("1"), a)],
                [Edge::new(w("0"), b), Edge::new(w("1"), b)],
            ],
        )
        .unwrap();
        assert_eq!(num_restrictions(&t).unwrap(), 1);
    }

    #[test]
    fn equality() {
        let ff = crate::construct::compose_machines(&fp(2), &fp(2));
        assert!(equal(&ff, &Transducer::identity()).unwrap());
        let renamed = two_state().renumbered(&[StateId::new(1), StateId::new(0)]);
        assert!(equal(&two_state(), &renamed).unwrap());
        assert!(!equal(&two_state(), &Transducer::identity()).unwrap());
    }

    #[test]
    fn restriction_at_root_is_canonical_form() {
        let r = restriction(&two_state(), &Word::empty()).unwrap();
        assert!(r.prefix_out.is_empty());
        assert_eq!(r.machine, minimize(&two_state()).unwrap());
    }

    #[test]
    fn probe_identity_and_constant() {
        assert!(bijectivity_probe(&Transducer::identity(), 4)
            .unwrap()
            .passed());
        assert!(bijectivity_probe(&fp(3), 5).unwrap().passed());
    }
}
