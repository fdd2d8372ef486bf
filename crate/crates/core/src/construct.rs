//! Transducer constructions behind the group operations.
//!
//! These work on bare machines and never canonicalize; [`crate::element`]
//! wraps them with inverses and canonical forms.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::code::ExchangeTable;
use crate::transducer::{Edge, StateId, Transducer};
use crate::word::Word;

/// Appends the states of `t` to `edges`, returning the offset.
fn append(edges: &mut Vec<[Edge; 2]>, t: &Transducer) -> usize {
    let offset = edges.len();
    edges.extend(t.states().map(|s| {
        t.edges_of(s)
            .clone()
            .map(|e| Edge::new(e.out, StateId::new(e.to.index() + offset)))
    }));
    offset
}

/// `q₁ … q_p`: `q_i` copies its bit and moves on, `q_p` flips its bit and
/// returns to `q₁`. Flips every input position divisible by `p`.
pub fn fp_machine(p: usize) -> Transducer {
    assert!(p >= 1);
    let edges = (0..p)
        .map(|i| {
            let next = StateId::new((i + 1) % p);
            let flip = i + 1 == p;
            [false, true].map(|b| Edge::new(Word::bit(b ^ flip), next))
        })
        .collect();
    Transducer::from_edges_unchecked(StateId::new(0), edges)
}

/// `(f,g)`: a new root emits `0` and runs `f` on the rest, or emits `1`
/// and runs `g`.
pub fn pair_machine(f: &Transducer, g: &Transducer) -> Transducer {
    let mut edges = vec![[
        Edge::new(Word::empty(), StateId::new(0)),
        Edge::new(Word::empty(), StateId::new(0)),
    ]];
    let fo = append(&mut edges, f);
    let go = append(&mut edges, g);
    edges[0] = [
        Edge::new(Word::bit(false), StateId::new(f.initial().index() + fo)),
        Edge::new(Word::bit(true), StateId::new(g.initial().index() + go)),
    ];
    Transducer::from_edges_unchecked(StateId::new(0), edges)
}

/// The fixed point `g = (f, g)`: `f`'s machine plus a new initial state
/// that on `0` emits `0` and enters `f`, and on `1` emits `1` and stays.
pub fn fix_machine(f: &Transducer) -> Transducer {
    let mut edges = Vec::with_capacity(f.num_states() + 1);
    append(&mut edges, f);
    let root = StateId::new(edges.len());
    edges.push([
        Edge::new(Word::bit(false), f.initial()),
        Edge::new(Word::bit(true), root),
    ]);
    Transducer::from_edges_unchecked(root, edges)
}

/// Product machine for `outer ∘ inner` (apply `inner` first).
///
/// States are pairs `(s_inner, s_outer)`; on `σ` the inner machine emits
/// `β = o(s_inner, σ)` which the outer machine consumes. Only pairs
/// reachable from `(inner.initial, outer.initial)` are built, numbered in
/// breadth-first order.
pub fn compose_machines(outer: &Transducer, inner: &Transducer) -> Transducer {
    let start = (inner.initial(), outer.initial());
    let mut index: BTreeMap<(StateId, StateId), usize> = BTreeMap::new();
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    index.insert(start, 0);
    let mut edges = Vec::new();
    while let Some((si, so)) = queue.pop_front() {
        let pair = [false, true].map(|b| {
            let e = inner.edge(si, b);
            let (out, so2) = outer.step_word(so, &e.out);
            let key = (e.to, so2);
            let id = *index.entry(key).or_insert_with(|| {
                order.push(key);
                queue.push_back(key);
                order.len() - 1
            });
            Edge::new(out, StateId::new(id))
        });
        edges.push(pair);
    }
    Transducer::from_edges_unchecked(StateId::new(0), edges)
}

/// Proper prefixes of the words in `code`, numbered in sorted order (so the
/// root ε is 0 whenever the code is not `{ε}`).
fn spine_of<'a>(code: impl Iterator<Item = &'a Word>) -> BTreeMap<Word, usize> {
    let mut spine: BTreeMap<Word, usize> = BTreeMap::new();
    for alpha in code {
        for n in 0..alpha.len() {
            spine.insert(alpha.truncated(n), 0);
        }
    }
    for (i, v) in spine.values_mut().enumerate() {
        *v = i;
    }
    spine
}

/// Fills the spine states: an internal child is entered with empty output,
/// a code word is resolved through `leaf`.
fn wire_spine(
    edges: &mut [[Edge; 2]],
    spine: &BTreeMap<Word, usize>,
    mut leaf: impl FnMut(&Word) -> Edge,
) {
    for (node, &i) in spine {
        for b in [false, true] {
            let child = node.with(b);
            edges[i][b as usize] = match spine.get(&child) {
                Some(&j) => Edge::new(Word::empty(), StateId::new(j)),
                None => leaf(&child),
            };
        }
    }
}

fn placeholder() -> [Edge; 2] {
    [
        Edge::new(Word::empty(), StateId::new(0)),
        Edge::new(Word::empty(), StateId::new(0)),
    ]
}

/// Spine of states spelling the domain code with empty outputs; completing
/// a domain word `α` emits its image `β` and enters the copy state.
pub fn prefix_exchange_machine(table: &ExchangeTable) -> Transducer {
    let spine = spine_of(table.rules().iter().map(|(a, _)| a));
    if spine.is_empty() {
        return Transducer::identity();
    }
    let copy = StateId::new(spine.len());
    let mut edges = vec![placeholder(); spine.len()];
    edges.push([
        Edge::new(Word::bit(false), copy),
        Edge::new(Word::bit(true), copy),
    ]);
    let image: BTreeMap<&Word, &Word> = table.rules().iter().map(|(a, b)| (a, b)).collect();
    wire_spine(&mut edges, &spine, |alpha| {
        Edge::new(image[alpha].clone(), copy)
    });
    Transducer::from_edges_unchecked(StateId::new(0), edges)
}

/// Glues pieces along a complete prefix code: the result agrees with `g_i`
/// on the cone `I_{α_i}`.
///
/// The spine spells the code with empty outputs; completing `α_i` emits
/// `o_{g_i}(init, α_i)` and continues inside `g_i` at `t_{g_i}(init, α_i)`.
/// The caller guarantees the `α_i` form a complete prefix code.
pub fn glue_machine(pieces: &[(Word, &Transducer)]) -> Transducer {
    if let [(alpha, g)] = pieces {
        if alpha.is_empty() {
            return (*g).clone();
        }
    }
    let spine = spine_of(pieces.iter().map(|(a, _)| a));
    let mut edges = vec![placeholder(); spine.len()];
    let mut leaves: BTreeMap<Word, Edge> = BTreeMap::new();
    for (alpha, g) in pieces {
        let offset = append(&mut edges, g);
        let (out, s) = g.step_word(g.initial(), alpha);
        leaves.insert(
            alpha.clone(),
            Edge::new(out, StateId::new(s.index() + offset)),
        );
    }
    wire_spine(&mut edges, &spine, |child| {
        leaves
            .get(child)
            .cloned()
            .expect("pieces form a complete prefix code")
    });
    Transducer::from_edges_unchecked(StateId::new(0), edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transducer::tests::{two_state, w};

    fn x0_table() -> ExchangeTable {
        ExchangeTable::new(vec![
            (w("00"), w("0")),
            (w("01"), w("10")),
            (w("1"), w("11")),
        ])
        .unwrap()
    }

    #[test]
    fn fp_flips_every_pth_position() {
        let f2 = fp_machine(2);
        assert_eq!(f2.eval_prefix(&w("0011")), w("0110"));
        assert_eq!(f2.eval_prefix(&w("0000")), w("0101"));
        let f3 = fp_machine(3);
        assert_eq!(f3.num_states(), 3);
        // ρ = 0^{p-1}1 repeated comes out all zero.
        assert_eq!(f3.eval_prefix(&w("001001001")), w("000000000"));
    }

    #[test]
    fn x0_spine() {
        let x0 = prefix_exchange_machine(&x0_table());
        assert_eq!(x0.num_states(), 3);
        assert_eq!(x0.eval_prefix(&w("00")), w("0"));
        assert_eq!(x0.eval_prefix(&w("01")), w("10"));
        assert_eq!(x0.eval_prefix(&w("1")), w("11"));
        assert_eq!(x0.eval_prefix(&w("0111")), w("1011"));
    }

    #[test]
    fn trivial_exchange_is_identity() {
        let t = ExchangeTable::new(vec![(Word::empty(), Word::empty())]).unwrap();
        assert_eq!(prefix_exchange_machine(&t), Transducer::identity());
    }

    #[test]
    fn pairing_and_fix() {
        let x0 = prefix_exchange_machine(&x0_table());
        let p = pair_machine(&x0, &Transducer::identity());
        assert_eq!(p.eval_prefix(&w("100")), w("100"));
        assert_eq!(p.eval_prefix(&w("001")), w("010"));
        assert_eq!(p.eval_prefix(&w("0011")), w("0101"));
        let g = fix_machine(&fp_machine(2));
        assert_eq!(g.eval_prefix(&w("11001")), w("11000"));
        assert_eq!(g.num_states(), 3);
    }

    #[test]
    fn product_applies_inner_first() {
        let x0 = prefix_exchange_machine(&x0_table());
        let f2 = fp_machine(2);
        let c = compose_machines(&x0, &f2);
        for input in Word::all_up_to(8) {
            let inner = f2.eval_prefix(&input);
            assert_eq!(c.eval_prefix(&input), x0.eval_prefix(&inner));
        }
    }

    #[test]
    fn glue_of_single_root_piece_is_the_piece() {
        let f = two_state();
        assert_eq!(glue_machine(&[(Word::empty(), &f)]), f);
    }

    #[test]
    fn glue_matches_pieces_on_cones() {
        let f = two_state();
        let id = Transducer::identity();
        let h = glue_machine(&[(w("0"), &f), (w("10"), &id), (w("11"), &f)]);
        for rest in Word::all_up_to(5) {
            for alpha in [w("0"), w("10"), w("11")] {
                let g = if alpha == w("10") { &id } else { &f };
                let input = alpha.concat(&rest);
                assert_eq!(h.eval_prefix(&input), g.eval_prefix(&input));
            }
        }
    }
}
