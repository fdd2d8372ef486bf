//! Seeded random elements and machines for property testing.
//!
//! Everything is driven by a ChaCha8 stream so that a seed reproduces the
//! same trees and machines on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratgroup_core::code::{self, ExchangeTable};
use ratgroup_core::{Edge, Element, StateId, Transducer, Word};

/// Relative weights of the constructors used at interior nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    pub atom: u32,
    pub pair: u32,
    pub fix: u32,
    pub compose: u32,
    pub inverse: u32,
    pub glue: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            atom: 1,
            pair: 2,
            fix: 1,
            compose: 3,
            inverse: 1,
            glue: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub seed: u64,
    /// Upper bound on the number of states of random raw machines.
    pub max_states: usize,
    /// Depth of element trees; depth 0 is the identity.
    pub depth: usize,
    pub weights: Weights,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            seed: 0,
            max_states: 8,
            depth: 4,
            weights: Weights::default(),
        }
    }
}

impl GeneratorSpec {
    pub fn with_seed(seed: u64) -> Self {
        GeneratorSpec {
            seed,
            ..Default::default()
        }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    spec: GeneratorSpec,
}

impl Generator {
    pub fn new(spec: GeneratorSpec) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            spec,
        }
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A random complete prefix code with `k` words.
    pub fn code(&mut self, k: usize) -> Vec<Word> {
        let mut code = vec![Word::empty()];
        while code.len() < k {
            let i = self.rng.gen_range(0..code.len());
            let w = code.swap_remove(i);
            code.push(w.with(false));
            code.push(w.with(true));
        }
        code.sort();
        code
    }

    /// A random element of Thompson's group V with 2 to 4 cones.
    pub fn table(&mut self) -> ExchangeTable {
        let k = self.rng.gen_range(2..=4);
        let domain = self.code(k);
        let mut range = self.code(k);
        range.shuffle(&mut self.rng);
        ExchangeTable::from_codes(domain, range).expect("random codes are complete")
    }

    fn atom(&mut self) -> Element {
        match self.rng.gen_range(0..6) {
            0 => Element::identity(),
            1 => Element::x0(),
            2 => Element::swap(),
            3 => Element::fp(if self.rng.gen_bool(0.5) { 2 } else { 3 }).expect("prime"),
            _ => Element::prefix_exchange(self.table()),
        }
    }

    /// `α·h(ζ)` on `I_α`, identity elsewhere.
    fn lift(alpha: &Word, h: &Element) -> Element {
        let id = Element::identity();
        alpha.iter().rev().fold(h.clone(), |acc, &b| {
            if b {
                Element::pair(&id, &acc)
            } else {
                Element::pair(&acc, &id)
            }
        })
    }

    /// A glued element that is bijective by construction: a prefix exchange
    /// after independent actions inside each domain cone.
    fn glued(&mut self, depth: usize) -> Element {
        let table = self.table();
        let p = Element::prefix_exchange(table.clone());
        let pieces = table
            .rules()
            .iter()
            .map(|(alpha, _)| {
                let h = self.element(depth.saturating_sub(1).min(2));
                (alpha.clone(), Element::compose(&p, &Self::lift(alpha, &h)))
            })
            .collect();
        Element::glue(pieces).expect("domain code is complete")
    }

    /// A random constructor-built element of the given depth. Always
    /// invertible.
    pub fn element(&mut self, depth: usize) -> Element {
        if depth == 0 {
            return Element::identity();
        }
        let w = &self.spec.weights;
        let choices = [
            (0, w.atom),
            (1, w.pair),
            (2, w.fix),
            (3, w.compose),
            (4, w.inverse),
            (5, w.glue),
        ];
        let kind = if depth == 1 {
            0
        } else {
            choices
                .choose_weighted(&mut self.rng, |c| c.1)
                .map_or(0, |c| c.0)
        };
        let d = depth - 1;
        match kind {
            0 => self.atom(),
            1 => {
                let (a, b) = (self.element(d), self.element(d));
                Element::pair(&a, &b)
            }
            2 => Element::fix(&self.element(d)),
            3 => {
                let (a, b) = (self.element(d), self.element(d));
                Element::compose(&a, &b)
            }
            4 => self
                .element(d)
                .inverse()
                .expect("generated elements are invertible"),
            _ => self.glued(d),
        }
    }

    /// An element whose depth lies between half the configured depth and
    /// the configured depth.
    pub fn any_element(&mut self) -> Element {
        let top = self.spec.depth.max(1);
        let d = self.rng.gen_range(top.div_ceil(2)..=top);
        self.element(d)
    }

    /// A random complete machine with 1 to `max_states` states and outputs
    /// of length at most 2.
    pub fn machine(&mut self) -> Transducer {
        let n = self.rng.gen_range(1..=self.spec.max_states.max(1));
        self.machine_with_states(n)
    }

    pub fn machine_with_states(&mut self, n: usize) -> Transducer {
        let edges = (0..n)
            .map(|_| {
                [false, true].map(|_| {
                    let len = self.rng.gen_range(0..=2);
                    let out = Word::from_bits((0..len).map(|_| self.rng.gen_bool(0.5)));
                    Edge::new(out, StateId::new(self.rng.gen_range(0..n)))
                })
            })
            .collect();
        Transducer::from_edges(StateId::new(0), edges).expect("complete by construction")
    }

    /// A machine inducing the same map as `t` but with duplicated states,
    /// delayed outputs, unreachable junk and shuffled state ids.
    pub fn obfuscate(&mut self, t: &Transducer) -> Transducer {
        let mut edges: Vec<[Edge; 2]> = t.states().map(|s| t.edges_of(s).clone()).collect();
        let initial = t.initial().index();

        // Duplicate a few states and spread incoming edges over the copies.
        for _ in 0..self.rng.gen_range(1..=3) {
            let s = self.rng.gen_range(0..edges.len());
            let copy = edges.len();
            edges.push(edges[s].clone());
            for pair in edges.iter_mut() {
                for e in pair.iter_mut() {
                    if e.to.index() == s && self.rng.gen_bool(0.5) {
                        e.to = StateId::new(copy);
                    }
                }
            }
        }

        // Delay: hold back a suffix of every edge entering `s` and emit it on
        // leaving `s` instead, o'(x,σ) = D(x)·o(x,σ)·D(t(x,σ))⁻¹.
        let mut delay = vec![Word::empty(); edges.len()];
        for _ in 0..self.rng.gen_range(1..=4) {
            let s = self.rng.gen_range(0..edges.len());
            if s == initial || !delay[s].is_empty() {
                continue;
            }
            let len = self.rng.gen_range(1..=2);
            let Some(first) = edges.iter().flatten().find(|e| e.to.index() == s) else {
                continue;
            };
            if first.out.len() < len {
                continue;
            }
            delay[s] = first.out.suffix_from(first.out.len() - len);
            if !delays_fit(&edges, &delay) {
                delay[s] = Word::empty();
            }
        }
        for x in 0..edges.len() {
            for e in edges[x].iter_mut() {
                let full = delay[x].concat(&e.out);
                let cut = full.len() - delay[e.to.index()].len();
                e.out = full.truncated(cut);
            }
        }

        // Unreachable junk.
        let n = edges.len();
        for _ in 0..self.rng.gen_range(0..=2) {
            let junk = [false, true]
                .map(|b| Edge::new(Word::bit(!b), StateId::new(self.rng.gen_range(0..=n))));
            edges.push(junk);
        }
        let total = edges.len();
        for pair in edges.iter_mut() {
            for e in pair.iter_mut() {
                if e.to.index() >= total {
                    e.to = StateId::new(total - 1);
                }
            }
        }

        // Shuffle ids.
        let mut perm: Vec<usize> = (0..total).collect();
        perm.shuffle(&mut self.rng);
        let mut shuffled = vec![edges[0].clone(); total];
        for (old, pair) in edges.into_iter().enumerate() {
            shuffled[perm[old]] = pair.map(|e| Edge::new(e.out, StateId::new(perm[e.to.index()])));
        }
        Transducer::from_edges(StateId::new(perm[initial]), shuffled)
            .expect("closed by construction")
    }
}

fn delays_fit(edges: &[[Edge; 2]], delay: &[Word]) -> bool {
    edges.iter().enumerate().all(|(x, pair)| {
        pair.iter().all(|e| {
            let d = &delay[e.to.index()];
            let full = delay[x].concat(&e.out);
            full.len() >= d.len() && full.suffix_from(full.len() - d.len()) == *d
        })
    })
}

/// A reproducible constructor tree of exactly the configured depth.
pub fn gen_element(spec: &GeneratorSpec) -> Element {
    Generator::new(spec.clone()).element(spec.depth)
}

pub fn gen_machine(spec: &GeneratorSpec) -> Transducer {
    Generator::new(spec.clone()).machine()
}

/// Whether `code` is usable as the support set `E` of a small-support
/// factorization: a nonempty antichain not covering everything.
pub fn is_proper_clopen(code: &[Word]) -> bool {
    !code.is_empty()
        && code::is_antichain(code)
        && code::complement(code).is_ok_and(|c| !c.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ratgroup_core::{equal, MachineDraft};

    #[test]
    fn depth_zero_is_identity() {
        let e = gen_element(&GeneratorSpec {
            depth: 0,
            ..Default::default()
        });
        assert_eq!(e.to_string(), "id");
    }

    #[test]
    fn deterministic() {
        let spec = GeneratorSpec {
            seed: 7,
            depth: 3,
            ..Default::default()
        };
        assert_eq!(
            gen_element(&spec).to_string(),
            gen_element(&spec).to_string()
        );
        assert_eq!(gen_machine(&spec), gen_machine(&spec));
    }

    #[test]
    fn generated_elements_are_invertible() {
        let mut g = Generator::new(GeneratorSpec::with_seed(3));
        for _ in 0..30 {
            let e = g.any_element();
            assert!(e.is_invertible(), "{e}");
        }
    }

    #[test]
    fn generated_machines_validate() {
        let mut g = Generator::new(GeneratorSpec::with_seed(11));
        for _ in 0..50 {
            let m = g.machine();
            assert!(MachineDraft::from(&m).validate().is_empty());
            assert!(m.num_states() <= 8);
        }
    }

    #[test]
    fn obfuscation_preserves_the_map() {
        let mut g = Generator::new(GeneratorSpec::with_seed(5));
        for _ in 0..30 {
            let e = g.any_element();
            let o = g.obfuscate(e.forward());
            assert!(equal(&o, e.forward()).unwrap(), "{e}");
        }
    }
}
