//! Cycle structure of transducers.
//!
//! A cycle is a pair `(c, γ)` with `t(c, γ) = c`; it is accessible when `c`
//! is reachable from the initial state. Within a strongly connected
//! component the gcd of all cycle lengths (the *period*) can be read off a
//! BFS level assignment, which makes obliviousness to a prime a polynomial
//! check instead of a search over cycles.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};
use core::fmt;

use crate::transducer::{StateId, Transducer};

/// Default cap on the number of simple cycles enumerated.
pub const CYCLE_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("{0} is not prime")]
pub struct NotPrime(pub u64);

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Nonnegative reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// One strongly connected component that carries at least one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccSummary {
    pub states: Vec<StateId>,
    /// gcd of the lengths of all cycles through the component.
    pub period: u64,
    /// Least total output length of a cycle inside the component.
    pub min_output_per_cycle: usize,
    pub has_empty_output_cycle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleReport {
    /// Accessible components with an edge, ordered by their smallest state.
    pub sccs: Vec<SccSummary>,
    pub accessible_count: usize,
}

impl CycleReport {
    pub fn has_empty_output_cycle(&self) -> bool {
        self.sccs.iter().any(|c| c.has_empty_output_cycle)
    }
}

fn accessible_mask(t: &Transducer) -> Vec<bool> {
    let mut mask = vec![false; t.num_states()];
    for s in t.bfs_order() {
        mask[s.index()] = true;
    }
    mask
}

/// States reachable from the initial state, in increasing id order.
pub fn accessible_states(t: &Transducer) -> Vec<StateId> {
    let mut v = t.bfs_order();
    v.sort();
    v
}

/// Tarjan's algorithm restricted to `mask`; returns a component id per
/// state (`usize::MAX` outside the mask).
fn scc_ids(t: &Transducer, mask: &[bool]) -> Vec<usize> {
    const NONE: usize = usize::MAX;
    let n = t.num_states();
    let mut index = vec![NONE; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![NONE; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in (0..n).filter(|&v| mask[v]) {
        if index[root] != NONE {
            continue;
        }
        // (vertex, next bit to explore)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut bit)) = call.last_mut() {
            if *bit < 2 {
                let w = t.next(StateId::new(v), *bit == 1).index();
                *bit += 1;
                if index[w] == NONE {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Period and least cycle output of one component.
fn summarize(t: &Transducer, members: &[usize], comp: &[usize]) -> Option<SccSummary> {
    let id = comp[members[0]];
    let inside = |v: usize| comp[v] == id;
    let has_edge = members.iter().any(|&u| {
        [false, true]
            .iter()
            .any(|&b| inside(t.next(StateId::new(u), b).index()))
    });
    if !has_edge {
        return None;
    }

    // BFS levels from the first member over internal edges.
    let mut level = vec![usize::MAX; t.num_states()];
    level[members[0]] = 0;
    let mut queue = alloc::collections::VecDeque::from([members[0]]);
    while let Some(u) = queue.pop_front() {
        for b in [false, true] {
            let v = t.next(StateId::new(u), b).index();
            if inside(v) && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut period = 0u64;
    for &u in members {
        for b in [false, true] {
            let v = t.next(StateId::new(u), b).index();
            if inside(v) {
                let d = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs();
                period = gcd(period, d);
            }
        }
    }

    // Least-output cycle: shortest path (weights = output lengths) from u
    // back to u, minimized over u.
    let mut best = usize::MAX;
    for &u in members {
        let mut dist = vec![usize::MAX; t.num_states()];
        let mut heap = BinaryHeap::new();
        dist[u] = 0;
        heap.push(Reverse((0usize, u)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if d > dist[x] || d >= best {
                continue;
            }
            for e in t.edges_of(StateId::new(x)) {
                let y = e.to.index();
                if !inside(y) {
                    continue;
                }
                let nd = d + e.out.len();
                if y == u {
                    best = best.min(nd);
                } else if nd < dist[y] {
                    dist[y] = nd;
                    heap.push(Reverse((nd, y)));
                }
            }
        }
    }

    Some(SccSummary {
        states: members.iter().map(|&v| StateId::new(v)).collect(),
        period,
        min_output_per_cycle: best,
        has_empty_output_cycle: best == 0,
    })
}

/// Components of the accessible subgraph with their periods and least
/// cycle outputs.
pub fn analyze_cycles(t: &Transducer) -> CycleReport {
    let mask = accessible_mask(t);
    let comp = scc_ids(t, &mask);
    let ncomp = comp
        .iter()
        .filter(|&&c| c != usize::MAX)
        .max()
        .map_or(0, |m| m + 1);
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (v, &c) in comp.iter().enumerate() {
        if c != usize::MAX {
            groups[c].push(v);
        }
    }
    let mut sccs: Vec<SccSummary> = groups
        .iter()
        .filter_map(|g| summarize(t, g, &comp))
        .collect();
    sccs.sort_by_key(|c| c.states[0]);
    CycleReport {
        sccs,
        accessible_count: mask.iter().filter(|&&b| b).count(),
    }
}

/// Whether `t` has an accessible cycle whose length is not a multiple of
/// the prime `p`.
pub fn is_oblivious(t: &Transducer, p: u64) -> Result<bool, NotPrime> {
    if !is_prime(p) {
        return Err(NotPrime(p));
    }
    Ok(analyze_cycles(t).sccs.iter().any(|c| c.period % p != 0))
}

/// Length and total output length of one simple cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleStat {
    pub length: usize,
    pub output: usize,
}

/// Simple accessible cycles (as edge sequences; parallel edges give
/// distinct cycles). Stops after `cap` cycles or a proportional amount of
/// search, reporting truncation in the second component.
pub fn simple_cycles(t: &Transducer, cap: usize) -> (Vec<CycleStat>, bool) {
    let mask = accessible_mask(t);
    let comp = scc_ids(t, &mask);
    let budget = cap.saturating_mul(64).max(1 << 16);
    let mut steps = 0usize;
    let mut found = Vec::new();
    let mut on_path = vec![false; t.num_states()];
    for s in (0..t.num_states()).filter(|&v| mask[v]) {
        // (vertex, next bit, length so far, output so far)
        let mut path: Vec<(usize, usize, usize, usize)> = vec![(s, 0, 0, 0)];
        on_path[s] = true;
        while let Some(&mut (v, ref mut bit, len, out)) = path.last_mut() {
            if *bit == 2 {
                on_path[v] = false;
                path.pop();
                continue;
            }
            let e = t.edge(StateId::new(v), *bit == 1);
            *bit += 1;
            steps += 1;
            if found.len() >= cap || steps > budget {
                for &(u, ..) in &path {
                    on_path[u] = false;
                }
                return (found, true);
            }
            let w = e.to.index();
            let (nlen, nout) = (len + 1, out + e.out.len());
            if w == s {
                found.push(CycleStat {
                    length: nlen,
                    output: nout,
                });
            } else if w > s && comp[w] == comp[s] && !on_path[w] {
                on_path[w] = true;
                path.push((w, 0, nlen, nout));
            }
        }
    }
    (found, false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipschitzReport {
    /// Least output/length ratio over simple accessible cycles; `None` when
    /// enumeration was truncated.
    pub min_ratio: Option<Ratio>,
    pub max_ratio: Option<Ratio>,
    /// Exact, from [`analyze_cycles`]. A cycle emitting nothing is evidence
    /// against the map being bilipschitz.
    pub has_empty_output_cycle: bool,
    pub cycles_examined: usize,
    pub truncated: bool,
}

/// Output-length to input-length ratios over simple accessible cycles.
/// Heuristic only: it does not decide bilipschitz membership.
pub fn lipschitz_report(t: &Transducer) -> LipschitzReport {
    let (cycles, truncated) = simple_cycles(t, CYCLE_CAP);
    let ratios = cycles
        .iter()
        .map(|c| Ratio::new(c.output as u64, c.length as u64));
    let (min_ratio, max_ratio) = if truncated {
        (None, None)
    } else {
        (ratios.clone().min(), ratios.max())
    };
    LipschitzReport {
        min_ratio,
        max_ratio,
        has_empty_output_cycle: analyze_cycles(t).has_empty_output_cycle(),
        cycles_examined: cycles.len(),
        truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::fp_machine;
    use crate::transducer::tests::{two_state, w};
    use crate::transducer::{Edge, MachineDraft};

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn accessible() {
        assert_eq!(
            accessible_states(&two_state()),
            vec![StateId::new(0), StateId::new(1)]
        );
        assert_eq!(accessible_states(&fp_machine(3)).len(), 3);
        let mut d = MachineDraft::from(&two_state());
        d.num_states = 3;
        d.edges.push(Default::default());
        d.set(2, false, w("1"), 0);
        d.set(2, true, w("1"), 0);
        let t = d.build().unwrap();
        assert_eq!(
            accessible_states(&t),
            vec![StateId::new(0), StateId::new(1)]
        );
    }

    #[test]
    fn two_state_cycles() {
        let r = analyze_cycles(&two_state());
        assert_eq!(r.accessible_count, 2);
        assert_eq!(r.sccs.len(), 1);
        assert_eq!(r.sccs[0].states.len(), 2);
        assert_eq!(r.sccs[0].period, 1);
        assert_eq!(r.sccs[0].min_output_per_cycle, 1);
        assert!(!r.sccs[0].has_empty_output_cycle);
    }

    #[test]
    fn fp_period() {
        let r = analyze_cycles(&fp_machine(5));
        assert_eq!(r.sccs.len(), 1);
        assert_eq!(r.sccs[0].period, 5);
        let id = analyze_cycles(&Transducer::identity());
        assert_eq!(id.sccs[0].period, 1);
        assert!(!id.has_empty_output_cycle());
    }

    #[test]
    fn obliviousness() {
        assert!(!is_oblivious(&fp_machine(3), 3).unwrap());
        assert!(is_oblivious(&fp_machine(3), 2).unwrap());
        assert!(is_oblivious(&Transducer::identity(), 7).unwrap());
        assert_eq!(is_oblivious(&fp_machine(3), 4), Err(NotPrime(4)));
    }

    #[test]
    fn empty_output_cycle_detected() {
        let (a, b) = (StateId::new(0), StateId::new(1));
        let t = Transducer::from_edges(
            a,
            vec![
                [Edge::new(w(""), b), Edge::new(w("1"), a)],
                [Edge::new(w(""), a), Edge::new(w("0"), a)],
            ],
        )
        .unwrap();
        assert!(analyze_cycles(&t).has_empty_output_cycle());
        assert!(lipschitz_report(&t).has_empty_output_cycle);
    }

    #[test]
    fn lipschitz_two_state() {
        let r = lipschitz_report(&two_state());
        assert_eq!(r.min_ratio, Some(Ratio::new(1, 2)));
        assert_eq!(r.max_ratio, Some(Ratio::new(2, 1)));
        assert_eq!(r.cycles_examined, 3);
        assert!(!r.truncated);
    }

    #[test]
    fn lipschitz_synchronous() {
        for t in [fp_machine(4), Transducer::identity()] {
            let r = lipschitz_report(&t);
            assert_eq!(r.min_ratio, Some(Ratio::new(1, 1)));
            assert_eq!(r.max_ratio, Some(Ratio::new(1, 1)));
        }
    }

    #[test]
    fn ratio_order_and_display() {
        assert!(Ratio::new(1, 2) < Ratio::new(2, 3));
        assert_eq!(Ratio::new(2, 4), Ratio::new(1, 2));
        assert_eq!(alloc::format!("{}", Ratio::new(4, 2)), "2");
        assert_eq!(alloc::format!("{}", Ratio::new(1, 2)), "1/2");
    }
}
