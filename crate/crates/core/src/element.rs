//! Elements of the rational group as expression trees.
//!
//! Every [`Element`] carries the machine it realizes and, when one is known,
//! a machine for its inverse. Constructors build both sides at once, so
//! inverses are maintained structurally rather than computed from an
//! arbitrary machine. Products follow `(ab)(x) = a(b(x))`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::code::{self, ExchangeTable};
use crate::construct;
use crate::cycles::is_prime;
use crate::error::{ElementError, NormalizeError};
use crate::normalize::{self, minimize, trim};
use crate::transducer::Transducer;
use crate::word::Word;

/// Depth limit when resolving the image of a cone into a prefix code.
pub const IMAGE_DEPTH: usize = 64;

#[derive(Clone, Debug)]
pub enum Expr {
    Identity,
    /// A user-supplied machine, optionally with a machine for its inverse.
    Raw {
        label: String,
        machine: Transducer,
        inverse: Option<Transducer>,
    },
    PrefixExchange(ExchangeTable),
    Fp(u64),
    Pair(Element, Element),
    Fix(Element),
    Compose(Element, Element),
    /// Only wraps raw leaves; every other node inverts structurally.
    Inverse(Element),
    Glue(Vec<(Word, Element)>),
}

#[derive(Debug)]
struct Node {
    expr: Expr,
    forward: Transducer,
    backward: Option<Transducer>,
}

/// A group element. Cloning is cheap; elements are immutable.
#[derive(Clone, Debug)]
pub struct Element(Arc<Node>);

/// `f = g⁻¹ · (g f)` with `g` and `g f` of small support.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub g: Element,
    pub gf: Element,
    /// Cones of `f(I_E)`.
    pub image: Vec<Word>,
    /// `I_E ∪ f(I_E)` is a proper subset, so `g` has small support.
    pub small_support: bool,
}

/// Canonical machine when the map is a homeomorphism, trimmed machine
/// otherwise.
fn settle(t: Transducer) -> Transducer {
    match minimize(&t) {
        Ok(c) => c.into_machine(),
        Err(_) => trim(&t),
    }
}

fn both<T>(a: Option<T>, b: Option<T>) -> Option<(T, T)> {
    a.zip(b)
}

fn x0_table() -> ExchangeTable {
    let w = |s| Word::parse(s).unwrap();
    ExchangeTable::new(vec![
        (w("00"), w("0")),
        (w("01"), w("10")),
        (w("1"), w("11")),
    ])
    .expect("x0 table is valid")
}

fn swap_table() -> ExchangeTable {
    ExchangeTable::new(vec![
        (Word::bit(false), Word::bit(true)),
        (Word::bit(true), Word::bit(false)),
    ])
    .expect("swap table is valid")
}

/// Cones whose union is `f(I_α)`, found with a machine for `f⁻¹`: a cone
/// `I_u` lies inside the image when the common prefix of `f⁻¹(I_u)`
/// extends `α`, misses it when the two are incomparable, and is split
/// otherwise.
pub fn image_code(inverse: &Transducer, alpha: &Word) -> Result<Vec<Word>, ElementError> {
    let c = minimize(inverse)?;
    let mut out = Vec::new();
    let mut stack = vec![Word::empty()];
    while let Some(u) = stack.pop() {
        let pre = c.machine().eval_prefix(&u);
        if alpha.is_prefix_of(&pre) {
            out.push(u);
        } else if pre.is_prefix_of(alpha) {
            if u.len() >= IMAGE_DEPTH {
                return Err(ElementError::ImageUnresolved {
                    cone: alpha.clone(),
                    depth: IMAGE_DEPTH,
                });
            }
            stack.push(u.with(true));
            stack.push(u.with(false));
        }
    }
    out.sort();
    Ok(out)
}

fn check_clopen(which: &'static str, set: &[Word]) -> Result<(), ElementError> {
    if set.is_empty() {
        return Err(ElementError::ClopenSet {
            which,
            reason: "empty",
        });
    }
    if !code::is_antichain(set) {
        return Err(ElementError::ClopenSet {
            which,
            reason: "cones overlap",
        });
    }
    if code::complement(set)?.is_empty() {
        return Err(ElementError::ClopenSet {
            which,
            reason: "covers the whole space",
        });
    }
    Ok(())
}

impl Element {
    fn from_parts(expr: Expr, forward: Transducer, backward: Option<Transducer>) -> Self {
        Element(Arc::new(Node {
            expr,
            forward,
            backward,
        }))
    }

    pub fn expr(&self) -> &Expr {
        &self.0.expr
    }

    /// The machine realizing this element. Canonical for constructor-built
    /// elements; as supplied for raw leaves.
    pub fn forward(&self) -> &Transducer {
        &self.0.forward
    }

    /// A machine for the inverse, when known.
    pub fn backward(&self) -> Option<&Transducer> {
        self.0.backward.as_ref()
    }

    pub fn is_invertible(&self) -> bool {
        self.0.backward.is_some()
    }

    pub fn eval_prefix(&self, w: &Word) -> Word {
        self.forward().eval_prefix(w)
    }

    /// Equality of the induced maps.
    pub fn equals(&self, other: &Element) -> Result<bool, NormalizeError> {
        normalize::equal(self.forward(), other.forward())
    }

    pub fn identity() -> Self {
        let id = Transducer::identity();
        Self::from_parts(Expr::Identity, id.clone(), Some(id))
    }

    pub fn raw(label: impl Into<String>, machine: Transducer, inverse: Option<Transducer>) -> Self {
        Self::from_parts(
            Expr::Raw {
                label: label.into(),
                machine: machine.clone(),
                inverse: inverse.clone(),
            },
            machine,
            inverse,
        )
    }

    /// `αζ ↦ βζ` for each rule `(α, β)`: an element of Thompson's group V.
    pub fn prefix_exchange(table: ExchangeTable) -> Self {
        let fwd = settle(construct::prefix_exchange_machine(&table));
        let bwd = settle(construct::prefix_exchange_machine(&table.flipped()));
        Self::from_parts(Expr::PrefixExchange(table), fwd, Some(bwd))
    }

    /// `x₀(00ζ) = 0ζ`, `x₀(01ζ) = 10ζ`, `x₀(1ζ) = 11ζ`.
    pub fn x0() -> Self {
        Self::prefix_exchange(x0_table())
    }

    /// Exchanges the cones `I₀` and `I₁`.
    pub fn swap() -> Self {
        Self::prefix_exchange(swap_table())
    }

    /// Flips every input position that is a multiple of the prime `p`.
    pub fn fp(p: u64) -> Result<Self, ElementError> {
        if !is_prime(p) {
            return Err(ElementError::NotPrime(p));
        }
        let m = construct::fp_machine(p as usize);
        Ok(Self::from_parts(Expr::Fp(p), m.clone(), Some(m)))
    }

    /// `(f,g)(0ζ) = 0 f(ζ)`, `(f,g)(1ζ) = 1 g(ζ)`.
    pub fn pair(f: &Element, g: &Element) -> Self {
        let fwd = settle(construct::pair_machine(f.forward(), g.forward()));
        let bwd = both(f.backward(), g.backward())
            .map(|(fi, gi)| settle(construct::pair_machine(fi, gi)));
        Self::from_parts(Expr::Pair(f.clone(), g.clone()), fwd, bwd)
    }

    /// The element `g = (f, g) = (f, (f, (f, …)))`.
    pub fn fix(f: &Element) -> Self {
        let fwd = settle(construct::fix_machine(f.forward()));
        let bwd = f.backward().map(|fi| settle(construct::fix_machine(fi)));
        Self::from_parts(Expr::Fix(f.clone()), fwd, bwd)
    }

    /// `a ∘ b`: apply `b`, then `a`.
    pub fn compose(a: &Element, b: &Element) -> Self {
        let fwd = settle(construct::compose_machines(a.forward(), b.forward()));
        let bwd = both(a.backward(), b.backward())
            .map(|(ai, bi)| settle(construct::compose_machines(bi, ai)));
        Self::from_parts(Expr::Compose(a.clone(), b.clone()), fwd, bwd)
    }

    /// Structural inverse: pairs, fixed points and products invert
    /// componentwise, prefix exchanges flip their table, `f_p` is an
    /// involution, glued elements are glued again over the image cones.
    pub fn inverse(&self) -> Result<Element, ElementError> {
        Ok(match self.expr() {
            Expr::Identity | Expr::Fp(_) => self.clone(),
            Expr::Raw { inverse: None, .. } => return Err(ElementError::NotInvertible),
            Expr::Raw { .. } => Self::from_parts(
                Expr::Inverse(self.clone()),
                self.backward().cloned().expect("raw inverse present"),
                Some(self.forward().clone()),
            ),
            Expr::Inverse(e) => e.clone(),
            Expr::PrefixExchange(t) => Self::prefix_exchange(t.flipped()),
            Expr::Pair(f, g) => Self::pair(&f.inverse()?, &g.inverse()?),
            Expr::Fix(f) => Self::fix(&f.inverse()?),
            Expr::Compose(a, b) => Self::compose(&b.inverse()?, &a.inverse()?),
            Expr::Glue(pieces) => {
                let mut inv = Vec::new();
                for (alpha, g) in pieces {
                    let gi = g.inverse()?;
                    for u in image_code(gi.forward(), alpha)? {
                        inv.push((u, gi.clone()));
                    }
                }
                Self::glue(inv)?
            }
        })
    }

    /// The element agreeing with `g_i` on each cone `I_{α_i}`; the `α_i`
    /// must form a complete prefix code.
    ///
    /// The result is a homeomorphism iff the images `g_i(I_{α_i})`
    /// partition the space. When every piece is invertible this is checked
    /// exactly and, if it holds, the inverse is glued from the inverses over
    /// the image cones; otherwise the element carries no inverse.
    pub fn glue(pieces: Vec<(Word, Element)>) -> Result<Element, ElementError> {
        let domain: Vec<Word> = pieces.iter().map(|(a, _)| a.clone()).collect();
        code::check_complete_code(&domain)?;
        let machines: Vec<(Word, &Transducer)> = pieces
            .iter()
            .map(|(a, g)| (a.clone(), g.forward()))
            .collect();
        let fwd = settle(construct::glue_machine(&machines));
        let bwd = Self::glue_inverse_machine(&pieces)?;
        Ok(Self::from_parts(Expr::Glue(pieces), fwd, bwd))
    }

    fn glue_inverse_machine(
        pieces: &[(Word, Element)],
    ) -> Result<Option<Transducer>, ElementError> {
        let mut inv: Vec<(Word, &Transducer)> = Vec::new();
        for (alpha, g) in pieces {
            let Some(gi) = g.backward() else {
                return Ok(None);
            };
            for u in image_code(gi, alpha)? {
                inv.push((u, gi));
            }
        }
        let images: Vec<Word> = inv.iter().map(|(u, _)| u.clone()).collect();
        if !code::is_complete_code(&images) {
            return Ok(None);
        }
        Ok(Some(settle(construct::glue_machine(&inv))))
    }

    /// Cones of `self(I_α)`. Needs the inverse machine.
    pub fn image_of_cone(&self, alpha: &Word) -> Result<Vec<Word>, ElementError> {
        let inv = self.backward().ok_or(ElementError::NotInvertible)?;
        image_code(inv, alpha)
    }

    /// A prefix exchange `g` with `g(I_{E1}) ⊆ I_{E2}`.
    ///
    /// The first cone of `E2` is subdivided into one subcone per cone of
    /// `E1`; the complements of `E1` and of that cone are brought to equal
    /// size by splitting their lexicographically last cones and matched in
    /// order.
    pub fn mover(e1: &[Word], e2: &[Word]) -> Result<Element, ElementError> {
        check_clopen("E1", e1)?;
        check_clopen("E2", e2)?;
        let mut src = e1.to_vec();
        src.sort();
        let target = e2.iter().min().expect("nonempty").clone();
        let dst = code::subdivide(&target, src.len());
        let mut rest_src = code::complement(&src)?;
        let mut rest_dst = code::complement(core::slice::from_ref(&target))?;
        while rest_src.len() < rest_dst.len() {
            code::split_last(&mut rest_src);
        }
        while rest_dst.len() < rest_src.len() {
            code::split_last(&mut rest_dst);
        }
        rest_src.sort();
        rest_dst.sort();
        src.extend(rest_src);
        let mut range = dst;
        range.extend(rest_dst);
        Ok(Self::prefix_exchange(ExchangeTable::from_codes(
            src, range,
        )?))
    }

    /// Splits `f` as `g⁻¹ (g f)` where `g` agrees with `f` on `I_E`, with
    /// `f⁻¹` on `f(I_E)` and is the identity elsewhere, so that `g f` is the
    /// identity on `I_E`. Requires `f(I_E)` to be disjoint from `I_E`.
    pub fn small_support_factor(f: &Element, e: &[Word]) -> Result<Factorization, ElementError> {
        if e.is_empty() || !code::is_antichain(e) {
            return Err(ElementError::ClopenSet {
                which: "E",
                reason: "not a nonempty antichain of cones",
            });
        }
        let finv = f.inverse()?;
        let mut image = Vec::new();
        for alpha in e {
            image.extend(f.image_of_cone(alpha)?);
        }
        image.sort();
        for alpha in e {
            if let Some(u) = image.iter().find(|u| u.comparable(alpha)) {
                return Err(ElementError::NotDisjoint {
                    cone: alpha.clone(),
                    image: u.clone(),
                });
            }
        }
        let mut covered: Vec<Word> = e.to_vec();
        covered.extend(image.iter().cloned());
        let rest = code::complement(&covered)?;
        let small_support = !rest.is_empty();
        let id = Element::identity();
        let pieces = e
            .iter()
            .map(|a| (a.clone(), f.clone()))
            .chain(image.iter().map(|u| (u.clone(), finv.clone())))
            .chain(rest.into_iter().map(|r| (r, id.clone())))
            .collect();
        let g = Element::glue(pieces)?;
        let gf = Element::compose(&g, f);
        Ok(Factorization {
            g,
            gf,
            image,
            small_support,
        })
    }

    /// Pairs of cones from different pieces whose images look like they
    /// overlap at the given depth below each `α_i`. An empty result is
    /// evidence that the glued map is injective; a hit may disappear at a
    /// larger depth.
    pub fn glue_overlap_probe(
        pieces: &[(Word, Element)],
        depth: usize,
    ) -> Result<Option<(Word, Word)>, ElementError> {
        let mut cones: Vec<(Word, usize)> = Vec::new();
        for (i, (alpha, g)) in pieces.iter().enumerate() {
            let c = minimize(g.forward())?;
            for v in Word::all_of_length(depth) {
                cones.push((c.machine().eval_prefix(&alpha.concat(&v)), i));
            }
        }
        for (i, (a, pa)) in cones.iter().enumerate() {
            for (b, pb) in &cones[i + 1..] {
                if pa != pb && a.comparable(b) {
                    return Ok(Some((a.clone(), b.clone())));
                }
            }
        }
        Ok(None)
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn bracket(a: &Element, b: &Element) -> Result<Element, ElementError> {
        let ab = Element::compose(a, b);
        let aba = Element::compose(&ab, &a.inverse()?);
        Ok(Element::compose(&aba, &b.inverse()?))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr() {
            Expr::Identity => f.write_str("id"),
            Expr::Raw { label, .. } => write!(f, "raw({label})"),
            Expr::PrefixExchange(t) if *t == x0_table() => f.write_str("x0"),
            Expr::PrefixExchange(t) if *t == swap_table() => f.write_str("swap"),
            Expr::PrefixExchange(t) => write!(f, "pex({t})"),
            Expr::Fp(p) => write!(f, "fp({p})"),
            Expr::Pair(a, b) => write!(f, "pair({a}, {b})"),
            Expr::Fix(a) => write!(f, "fix({a})"),
            Expr::Compose(a, b) => write!(f, "comp({a}, {b})"),
            Expr::Inverse(a) => write!(f, "inv({a})"),
            Expr::Glue(pieces) => {
                f.write_str("glue(")?;
                for (i, (alpha, g)) in pieces.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{alpha}:{g}")?;
                }
                f.write_str(")")
            }
        }
    }
}
