//! Property suites checking the constructive identities of the group
//! against seeded random elements and machines.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratgroup_core::construct::{compose_machines, fp_machine};
use ratgroup_core::cycles::{self, is_oblivious};
use ratgroup_core::{
    equal, minimize, restriction, Element, ElementError, NormalizeError, Transducer, Word,
};
use serde::Serialize;
use thiserror::Error;

use crate::format;
use crate::gen::{Generator, GeneratorSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hilbert,
    Commutator,
    SimplicityStep,
    SmallSupport,
    ObliviousProduct,
    FpCanonical,
    Involution,
    GroupAxioms,
    Canonicity,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Hilbert,
        Suite::Commutator,
        Suite::SimplicityStep,
        Suite::SmallSupport,
        Suite::ObliviousProduct,
        Suite::FpCanonical,
        Suite::Involution,
        Suite::GroupAxioms,
        Suite::Canonicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hilbert => "hilbert",
            Suite::Commutator => "commutator",
            Suite::SimplicityStep => "simplicity-step",
            Suite::SmallSupport => "small-support",
            Suite::ObliviousProduct => "oblivious-product",
            Suite::FpCanonical => "fp-canonical",
            Suite::Involution => "involution",
            Suite::GroupAxioms => "group-axioms",
            Suite::Canonicity => "canonicity",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_selection(name: &str) -> Result<Vec<Suite>, UnknownSuite> {
        if name == "all" {
            Ok(Self::ALL.to_vec())
        } else {
            name.parse().map(|s| vec![s])
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random cases per suite (per prime for the prime-indexed suites).
    pub cases: usize,
    pub probe_depth: usize,
    pub element_depth: usize,
    pub max_states: usize,
    /// Restricts the prime-indexed suites to one prime.
    pub p: Option<u64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            cases: 200,
            probe_depth: 12,
            element_depth: 4,
            max_states: 8,
            p: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub machine: Option<serde_json::Value>,
}

impl Witness {
    fn element(label: &str, e: &Element) -> Self {
        Witness {
            label: label.to_string(),
            expr: Some(e.to_string()),
            word: None,
            machine: Some(format::to_json_value(e.forward())),
        }
    }

    fn machine(label: &str, t: &Transducer) -> Self {
        Witness {
            label: label.to_string(),
            expr: None,
            word: None,
            machine: Some(format::to_json_value(t)),
        }
    }

    fn word(label: &str, w: &Word) -> Self {
        Witness {
            label: label.to_string(),
            expr: None,
            word: Some(w.to_string()),
            machine: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed)
    }

    pub fn pass_count(&self) -> usize {
        self.cases.iter().filter(|c| c.passed).count()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        writeln!(
            f,
            "{}: {status} ({}/{} cases, seed {})",
            self.suite,
            self.pass_count(),
            self.cases.len(),
            self.seed
        )?;
        for case in self.failures() {
            writeln!(
                f,
                "  {}: {}",
                case.name,
                case.reason.as_deref().unwrap_or("failed")
            )?;
            for w in &case.witnesses {
                write!(f, "    {}:", w.label)?;
                if let Some(e) = &w.expr {
                    write!(f, " {e}")?;
                }
                if let Some(word) = &w.word {
                    write!(f, " {word}")?;
                }
                if let Some(m) = &w.machine {
                    write!(f, " {m}")?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Why a single case failed.
#[derive(Clone, Debug)]
pub struct Failure {
    pub reason: String,
    pub witnesses: Vec<Witness>,
}

impl Failure {
    fn new(reason: impl Into<String>) -> Self {
        Failure {
            reason: reason.into(),
            witnesses: Vec::new(),
        }
    }

    fn with(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reason)?;
        for w in &self.witnesses {
            write!(f, "; {}", w.label)?;
            if let Some(e) = &w.expr {
                write!(f, " = {e}")?;
            }
            if let Some(word) = &w.word {
                write!(f, " = {word}")?;
            }
        }
        Ok(())
    }
}

impl From<NormalizeError> for Failure {
    fn from(e: NormalizeError) -> Self {
        Failure::new(e.to_string())
    }
}

impl From<ElementError> for Failure {
    fn from(e: ElementError) -> Self {
        Failure::new(e.to_string())
    }
}

pub type Check = Result<(), Failure>;

fn ensure(cond: bool, reason: impl FnOnce() -> Failure) -> Check {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

fn same(a: &Element, b: &Element, what: &str) -> Check {
    let ok = equal(a.forward(), b.forward())?;
    ensure(ok, || {
        Failure::new(format!("{what}: machines differ"))
            .with(Witness::element("lhs", a))
            .with(Witness::element("rhs", b))
    })
}

fn inv(e: &Element) -> Result<Element, Failure> {
    Ok(e.inverse()?)
}

fn comp(a: &Element, b: &Element) -> Element {
    Element::compose(a, b)
}

pub const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

struct Runner {
    cfg: SuiteConfig,
    master: ChaCha8Rng,
    cases: Vec<CaseResult>,
}

impl Runner {
    fn new(suite: Suite, cfg: &SuiteConfig) -> Self {
        let salt = Suite::ALL.iter().position(|s| *s == suite).unwrap_or(0) as u64;
        Runner {
            cfg: cfg.clone(),
            master: ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(31).wrapping_add(salt)),
            cases: Vec::new(),
        }
    }

    /// A fresh generator whose stream depends only on the seed and case
    /// index.
    fn generator(&mut self) -> Generator {
        Generator::new(GeneratorSpec {
            seed: self.master.gen(),
            max_states: self.cfg.max_states,
            depth: self.cfg.element_depth,
            ..Default::default()
        })
    }

    fn record(&mut self, name: String, check: Check) {
        let (passed, reason, witnesses) = match check {
            Ok(()) => (true, None, Vec::new()),
            Err(f) => (false, Some(f.reason), f.witnesses),
        };
        self.cases.push(CaseResult {
            name,
            passed,
            reason,
            witnesses,
        });
    }

    fn random_cases(&mut self, prefix: &str, mut case: impl FnMut(&mut Generator) -> Check) {
        for i in 0..self.cfg.cases {
            let mut g = self.generator();
            let result = case(&mut g);
            self.record(format!("{prefix}#{i}"), result);
        }
    }

    fn primes(&self, default: &[u64]) -> Vec<u64> {
        match self.cfg.p {
            Some(p) => vec![p],
            None => default.to_vec(),
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    let mut r = Runner::new(suite, cfg);
    match suite {
        Suite::Hilbert => hilbert(&mut r),
        Suite::Commutator => commutator(&mut r),
        Suite::SimplicityStep => simplicity_step(&mut r),
        Suite::SmallSupport => small_support(&mut r),
        Suite::ObliviousProduct => oblivious_product(&mut r),
        Suite::FpCanonical => fp_canonical(&mut r),
        Suite::Involution => involution(&mut r),
        Suite::GroupAxioms => group_axioms(&mut r),
        Suite::Canonicity => canonicity(&mut r),
    }
    SuiteReport {
        suite,
        seed: cfg.seed,
        cases: r.cases,
    }
}

fn check_fixed_point(f: &Element) -> Check {
    let g = Element::fix(f);
    same(&g, &Element::pair(f, &g), "fix(f) = pair(f, fix(f))")
}

fn hilbert(r: &mut Runner) {
    let fixed = [
        Element::x0(),
        Element::swap(),
        Element::fp(2).expect("prime"),
        Element::fp(3).expect("prime"),
    ];
    for f in fixed {
        r.record(format!("{f}"), check_fixed_point(&f));
    }
    r.random_cases("generated", |g| check_fixed_point(&g.any_element()));
}

/// `x0⁻¹ k x0 k⁻¹ = ((1, g), 1)` with `k = (1, fix(g))`.
pub fn check_commutator(g: &Element) -> Check {
    let id = Element::identity();
    let f = Element::pair(&Element::pair(&id, g), &id);
    let k = Element::pair(&id, &Element::fix(g));
    let x0 = Element::x0();
    let lhs = comp(&comp(&comp(&inv(&x0)?, &k), &x0), &inv(&k)?);
    same(&lhs, &f, "x0⁻¹ k x0 k⁻¹ = f").map_err(|e| e.with(Witness::element("g", g)))
}

fn commutator(r: &mut Runner) {
    r.random_cases("generated", |g| check_commutator(&g.any_element()));
}

/// `[g′, (h, 1)] = ([g, h], 1)` with `g′ = (g,1) f₁ (g,1)⁻¹ f₁⁻¹` and
/// `f₁` the swap.
pub fn check_simplicity_step(g: &Element, h: &Element) -> Check {
    let id = Element::identity();
    let f1 = Element::swap();
    let g1 = Element::pair(g, &id);
    let gp = comp(&comp(&comp(&g1, &f1), &inv(&g1)?), &inv(&f1)?);
    let lhs = Element::bracket(&gp, &Element::pair(h, &id))?;
    let rhs = Element::pair(&Element::bracket(g, h)?, &id);
    same(&lhs, &rhs, "[g′, (h,1)] = ([g,h], 1)").map_err(|e| {
        e.with(Witness::element("g", g))
            .with(Witness::element("h", h))
    })
}

fn simplicity_step(r: &mut Runner) {
    r.random_cases("generated", |g| {
        let a = g.any_element();
        let b = g.any_element();
        check_simplicity_step(&a, &b)
    });
}

/// Draws `(f, E)` with `f(I_E)` disjoint from `I_E`. Elements that fix
/// too much are pushed off a cone by a prefix exchange first.
fn draw_disjoint(g: &mut Generator) -> (Element, Vec<Word>) {
    loop {
        let k = g.rng().gen_range(3..=5);
        let code = g.code(k);
        let keep = g.rng().gen_range(1..code.len());
        let e: Vec<Word> = code[..keep].to_vec();
        let mut f = g.any_element();
        if g.rng().gen_bool(0.5) {
            let shift = Element::prefix_exchange(g.table());
            f = comp(&shift, &f);
        }
        if Element::small_support_factor(&f, &e).is_ok() {
            return (f, e);
        }
    }
}

pub fn check_small_support(f: &Element, e: &[Word], depth: usize) -> Check {
    let fac = Element::small_support_factor(f, e)?;
    let fail = |reason: &str| {
        let mut fl = Failure::new(reason).with(Witness::element("f", f));
        for alpha in e {
            fl = fl.with(Witness::word("E", alpha));
        }
        fl
    };
    let back = comp(&inv(&fac.g)?, &fac.gf);
    if !equal(back.forward(), f.forward())? {
        return Err(fail("g⁻¹ (g f) differs from f"));
    }
    let gf = minimize(fac.gf.forward())?;
    for alpha in e {
        for v in Word::all_of_length(depth) {
            let x = alpha.concat(&v);
            let y = gf.machine().eval_prefix(&x);
            if y != x {
                return Err(fail("g f moves a point of I_E")
                    .with(Witness::word("input", &x))
                    .with(Witness::word("output", &y)));
            }
        }
    }
    Ok(())
}

fn small_support(r: &mut Runner) {
    let depth = r.cfg.probe_depth;
    r.random_cases("generated", |g| {
        let (f, e) = draw_disjoint(g);
        check_small_support(&f, &e, depth)
    });
}

/// Obliviousness decided from the definition: some accessible state `c`
/// and word `γ` with `t(c, γ) = c` and `p ∤ |γ|`. Words up to the number of
/// states suffice because every cycle is built from simple ones.
pub fn oblivious_by_words(t: &Transducer, p: u64) -> bool {
    let n = t.num_states();
    let mut seen = vec![false; n];
    let mut stack = vec![t.initial()];
    seen[t.initial().index()] = true;
    while let Some(s) = stack.pop() {
        for b in [false, true] {
            let u = t.next(s, b);
            if !seen[u.index()] {
                seen[u.index()] = true;
                stack.push(u);
            }
        }
    }
    t.states().filter(|s| seen[s.index()]).any(|c| {
        (1..=n)
            .filter(|len| !(*len as u64).is_multiple_of(p))
            .any(|len| Word::all_of_length(len).any(|gamma| t.step_word(c, &gamma).1 == c))
    })
}

fn oblivious_product(r: &mut Runner) {
    for p in r.primes(&[2, 3, 5, 7]) {
        if !cycles::is_prime(p) {
            r.record(
                format!("p={p}"),
                Err(Failure::new(format!("{p} is not prime"))),
            );
            continue;
        }
        let max = r.cfg.max_states;
        r.random_cases(&format!("p={p}"), |g| {
            let n = g.rng().gen_range(1..p as usize);
            let small = g.machine_with_states(n);
            let f = loop {
                let m = g.machine();
                if is_oblivious(&m, p).expect("prime") {
                    break m;
                }
            };
            let product = compose_machines(&small, &f);
            let ok = is_oblivious(&product, p).expect("prime");
            ensure(ok, || {
                Failure::new("product of oblivious f and small f′ is not oblivious")
                    .with(Witness::machine("f", &f))
                    .with(Witness::machine("f′", &small))
                    .with(Witness::machine("f′f", &product))
            })?;
            let n = g.rng().gen_range(1..=max.min(6));
            let m = g.machine_with_states(n);
            let fast = is_oblivious(&m, p).expect("prime");
            ensure(fast == oblivious_by_words(&m, p), || {
                Failure::new(format!(
                    "cycle analysis says oblivious={fast}, word search disagrees"
                ))
                .with(Witness::machine("machine", &m))
            })
        });
    }
}

fn flip_every(p: usize, w: &Word, offset: usize) -> Word {
    w.iter()
        .enumerate()
        .map(|(i, &b)| b ^ (offset + i + 1).is_multiple_of(p))
        .collect()
}

/// Distinct restrictions of the flip-every-p map, told apart by their
/// action on `0^p`, `1^p` and the single-one words of length `p`, with
/// restrictions taken at prefixes of every length up to `2p`.
pub fn fp_restriction_oracle(p: usize) -> usize {
    let mut probes = vec![
        Word::from_bits(vec![false; p]),
        Word::from_bits(vec![true; p]),
    ];
    for i in 0..p {
        probes.push((0..p).map(|j| j == i).collect());
    }
    let mut sigs: Vec<Vec<Word>> = Vec::new();
    for len in 0..=2 * p {
        let alpha = Word::from_bits((0..len).map(|i| i % 3 == 1));
        let beta = flip_every(p, &alpha, 0);
        let sig: Vec<Word> = probes
            .iter()
            .map(|v| {
                let full = flip_every(p, &alpha.concat(v), 0);
                full.strip_prefix(&beta).expect("prefix preserved")
            })
            .collect();
        if !sigs.contains(&sig) {
            sigs.push(sig);
        }
    }
    sigs.len()
}

pub fn check_fp(p: u64) -> Check {
    let machine = fp_machine(p as usize);
    let fail = |reason: String| Failure::new(reason).with(Witness::machine("f_p", &machine));
    let canon = minimize(&machine)?;
    let states = canon.machine().num_states();
    if states != p as usize {
        return Err(fail(format!(
            "minimal machine has {states} states, expected {p}"
        )));
    }
    let oracle = fp_restriction_oracle(p as usize);
    if oracle != states {
        return Err(fail(format!(
            "restriction oracle counts {oracle}, canonical machine has {states}"
        )));
    }
    let report = cycles::analyze_cycles(canon.machine());
    let periods: Vec<u64> = report.sccs.iter().map(|s| s.period).collect();
    if periods != [p] {
        return Err(fail(format!("SCC periods {periods:?}, expected [{p}]")));
    }
    if is_oblivious(&machine, p).expect("prime") {
        return Err(fail(format!("reported oblivious to {p}")));
    }
    for q in PRIMES.into_iter().filter(|q| *q != p) {
        if !is_oblivious(&machine, q).expect("prime") {
            return Err(fail(format!("not oblivious to {q}")));
        }
    }
    let e = Element::fp(p)?;
    same(&comp(&e, &e), &Element::identity(), "f_p f_p = id")
}

fn fp_canonical(r: &mut Runner) {
    for p in r.primes(&PRIMES) {
        let check = if cycles::is_prime(p) {
            check_fp(p)
        } else {
            Err(Failure::new(format!("{p} is not prime")))
        };
        r.record(format!("p={p}"), check);
    }
}

fn involution(r: &mut Runner) {
    let id = Element::identity();
    for p in r.primes(&PRIMES) {
        let check = Element::fp(p)
            .map_err(Failure::from)
            .and_then(|e| same(&comp(&e, &e), &id, "f_p f_p = id"));
        r.record(format!("fp({p})"), check);
    }
    let s = Element::swap();
    r.record("swap".into(), same(&comp(&s, &s), &id, "swap swap = id"));
    r.random_cases("generated", |g| {
        let e = g.any_element();
        let back = inv(&inv(&e)?)?;
        same(&back, &e, "inv(inv(e)) = e")?;
        let machine_inverse = e
            .backward()
            .cloned()
            .ok_or_else(|| Failure::new("no inverse machine"))?;
        let lhs = compose_machines(&machine_inverse, e.forward());
        ensure(equal(&lhs, &Transducer::identity())?, || {
            Failure::new("backward machine does not invert forward").with(Witness::element("e", &e))
        })
    });
}

fn restriction_law(inner: &Element, bit: bool, depth: usize) -> Check {
    let id = Element::identity();
    let pair = if bit {
        Element::pair(&id, inner)
    } else {
        Element::pair(inner, &id)
    };
    for alpha in Word::all_up_to(depth) {
        let whole = restriction(pair.forward(), &Word::bit(bit).concat(&alpha))?;
        let part = restriction(inner.forward(), &alpha)?;
        let ok = whole.prefix_out == Word::bit(bit).concat(&part.prefix_out)
            && whole
                .machine
                .machine()
                .is_isomorphic(part.machine.machine());
        if !ok {
            return Err(Failure::new("pairing restriction law fails")
                .with(Witness::element("f", inner))
                .with(Witness::word("alpha", &Word::bit(bit).concat(&alpha))));
        }
    }
    Ok(())
}

fn group_axioms(r: &mut Runner) {
    r.random_cases("generated", |g| {
        let (a, b, c) = (g.any_element(), g.any_element(), g.any_element());
        let id = Element::identity();
        same(
            &comp(&a, &comp(&b, &c)),
            &comp(&comp(&a, &b), &c),
            "associativity",
        )?;
        same(&comp(&a, &inv(&a)?), &id, "a a⁻¹ = id")?;
        same(&comp(&inv(&a)?, &a), &id, "a⁻¹ a = id")?;
        same(&comp(&a, &id), &a, "a id = a")?;
        same(&comp(&id, &a), &a, "id a = a")?;
        let p = Element::pair(&a, &b);
        let left = restriction(p.forward(), &Word::bit(false))?;
        let right = restriction(p.forward(), &Word::bit(true))?;
        ensure(
            left.machine
                .machine()
                .is_isomorphic(minimize(a.forward())?.machine())
                && right
                    .machine
                    .machine()
                    .is_isomorphic(minimize(b.forward())?.machine()),
            || {
                Failure::new("pair(a, b) does not restrict to a and b")
                    .with(Witness::element("a", &a))
                    .with(Witness::element("b", &b))
            },
        )?;
        restriction_law(&a, false, 3)?;
        restriction_law(&b, true, 3)
    });
}

/// Prefix contract: two outputs for the same input never disagree.
fn consistent(a: &Word, b: &Word) -> bool {
    a.comparable(b)
}

fn canonicity(r: &mut Runner) {
    let depth = r.cfg.probe_depth;
    r.random_cases("generated", |g| {
        let a = g.any_element();
        let b = g.any_element();
        let t = g.obfuscate(&compose_machines(a.forward(), b.forward()));
        let fail = |reason: &str| Failure::new(reason).with(Witness::machine("machine", &t));
        let c = minimize(&t)?;
        for w in Word::all_up_to(depth) {
            if !consistent(&c.machine().eval_prefix(&w), &t.eval_prefix(&w)) {
                return Err(fail("minimization changes the map").with(Witness::word("input", &w)));
            }
        }
        let again = minimize(c.machine())?;
        ensure(again.machine() == c.machine(), || {
            fail("minimize is not idempotent")
        })?;
        let dup = g.obfuscate(&t);
        ensure(minimize(&dup)?.machine() == c.machine(), || {
            fail("obfuscated copy has a different canonical form")
                .with(Witness::machine("copy", &dup))
        })?;
        let onward = c.machine();
        for alpha in Word::all_up_to(6) {
            let res = restriction(&t, &alpha)?;
            for w in Word::all_up_to(6) {
                let lhs = onward.eval_prefix(&alpha.concat(&w));
                let rhs = res
                    .prefix_out
                    .concat(&res.machine.machine().eval_prefix(&w));
                if lhs != rhs {
                    return Err(fail("restriction coherence fails")
                        .with(Witness::word("alpha", &alpha))
                        .with(Witness::word("w", &w)));
                }
            }
        }
        Ok(())
    });
}

/// Runs every selected suite in order.
pub fn run_all(suites: &[Suite], cfg: &SuiteConfig) -> Vec<SuiteReport> {
    suites.iter().map(|s| run_suite(*s, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            cases: 5,
            ..Default::default()
        }
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_selection("all").unwrap().len(), 9);
        assert!(Suite::parse_selection("nope").is_err());
    }

    #[test]
    fn restriction_oracle_small_primes() {
        for p in [2, 3, 5, 7] {
            assert_eq!(fp_restriction_oracle(p), p);
        }
    }

    #[test]
    fn word_oracle_on_fp() {
        let m = fp_machine(3);
        assert!(!oblivious_by_words(&m, 3));
        assert!(oblivious_by_words(&m, 2));
    }

    #[test]
    fn every_suite_passes_small() {
        for s in Suite::ALL {
            let report = run_suite(s, &small());
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::Hilbert, &small());
        let b = run_suite(Suite::Hilbert, &small());
        assert_eq!(a, b);
    }

    #[test]
    fn failure_carries_witness() {
        let e = Element::x0();
        let err = same(&e, &Element::identity(), "x0 = id").unwrap_err();
        assert_eq!(err.witnesses.len(), 2);
        assert!(err.witnesses[0].machine.is_some());
    }
}
