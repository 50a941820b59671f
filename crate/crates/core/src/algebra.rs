//! Elements of the algebra generated by α(z), β(z), γ(z), δ(z), det⁻¹(z) and the
//! moment-map images f(λ), f(μ), realized as formal sums of words.
//!
//! No commutation relations are applied; words are only concatenated. Relations are
//! verified downstream in representations.

use crate::coef::CoefFn;
use crate::theta::ThetaContext;
use crate::C64;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl Gen {
    pub fn mnemonic(self) -> &'static str {
        match self {
            Gen::Alpha => "a",
            Gen::Beta => "b",
            Gen::Gamma => "g",
            Gen::Delta => "d",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Letter {
    Gen(Gen, C64),
    DetInv(C64),
    /// f(λ), the left moment map.
    Left(CoefFn),
    /// f(μ), the right moment map.
    Right(CoefFn),
}

pub type Word = Vec<Letter>;

impl Letter {
    pub fn alpha(z: C64) -> Letter {
        Letter::Gen(Gen::Alpha, z)
    }
    pub fn beta(z: C64) -> Letter {
        Letter::Gen(Gen::Beta, z)
    }
    pub fn gamma(z: C64) -> Letter {
        Letter::Gen(Gen::Gamma, z)
    }
    pub fn delta(z: C64) -> Letter {
        Letter::Gen(Gen::Delta, z)
    }

    pub fn bigrade(&self) -> (i32, i32) {
        match self {
            Letter::Gen(Gen::Alpha, _) => (1, 1),
            Letter::Gen(Gen::Beta, _) => (1, -1),
            Letter::Gen(Gen::Gamma, _) => (-1, 1),
            Letter::Gen(Gen::Delta, _) => (-1, -1),
            _ => (0, 0),
        }
    }
}

pub fn bigrade(word: &[Letter]) -> (i32, i32) {
    word.iter().fold((0, 0), |acc, l| {
        let g = l.bigrade();
        (acc.0 + g.0, acc.1 + g.1)
    })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Element {
    pub terms: Vec<(C64, Word)>,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Element {
            terms: vec![(C64::new(1.0, 0.0), Vec::new())],
        }
    }

    pub fn word(w: Word) -> Self {
        Element {
            terms: vec![(C64::new(1.0, 0.0), w)],
        }
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(vec![l])
    }

    pub fn scaled(&self, s: C64) -> Self {
        Element {
            terms: self.terms.iter().map(|(c, w)| (c * s, w.clone())).collect(),
        }
    }

    pub fn add(&self, o: &Element) -> Element {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Element { terms }
    }

    pub fn sub(&self, o: &Element) -> Element {
        self.add(&o.scaled(C64::new(-1.0, 0.0)))
    }

    /// Termwise concatenation.
    pub fn mul(&self, o: &Element) -> Element {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (c1, w1) in &self.terms {
            for (c2, w2) in &o.terms {
                let mut w = w1.clone();
                w.extend(w2.iter().cloned());
                terms.push((c1 * c2, w));
            }
        }
        Element { terms }
    }

    pub fn product(factors: &[Element]) -> Element {
        factors.iter().fold(Element::one(), |acc, f| acc.mul(f))
    }

    /// The antilinear antihomomorphic involution α(z)* = δ(1/z̄), β(z)* = −γ(1/z̄),
    /// γ(z)* = −β(1/z̄), δ(z)* = α(1/z̄), det⁻¹(z)* = det⁻¹(q^{−2}/z̄), f ↦ f̄.
    pub fn star(&self, ctx: &ThetaContext) -> Element {
        let q2 = ctx.qpow_r(2.0);
        let terms = self
            .terms
            .iter()
            .map(|(c, w)| {
                let mut sign = C64::new(1.0, 0.0);
                let nw = w
                    .iter()
                    .rev()
                    .map(|l| match l {
                        Letter::Gen(g, z) => {
                            let zi = z.conj().inv();
                            match g {
                                Gen::Alpha => Letter::delta(zi),
                                Gen::Delta => Letter::alpha(zi),
                                Gen::Beta => {
                                    sign = -sign;
                                    Letter::gamma(zi)
                                }
                                Gen::Gamma => {
                                    sign = -sign;
                                    Letter::beta(zi)
                                }
                            }
                        }
                        Letter::DetInv(z) => Letter::DetInv(z.conj().inv() / q2),
                        Letter::Left(f) => Letter::Left(f.conj()),
                        Letter::Right(f) => Letter::Right(f.conj()),
                    })
                    .collect();
                (c.conj() * sign, nw)
            })
            .collect();
        Element { terms }
    }

    /// The antipode, extended as an antihomomorphism.
    pub fn antipode(&self, ctx: &ThetaContext) -> Element {
        let mut out = Element::zero();
        for (c, w) in &self.terms {
            let images: Vec<Element> = w.iter().rev().map(|l| antipode_letter(l, ctx)).collect();
            out = out.add(&Element::product(&images).scaled(*c));
        }
        out
    }

    pub fn coproduct(&self) -> Tensor {
        let mut out = Tensor { terms: Vec::new() };
        for (c, w) in &self.terms {
            let mut acc = Tensor::one();
            for l in w {
                acc = acc.mul(&coproduct_letter(l));
            }
            for (s, a, b) in acc.terms {
                out.terms.push((s * c, a, b));
            }
        }
        out
    }

    /// Counit as a sum of difference operators f·T_shift, zero terms dropped and equal
    /// operators merged.
    pub fn counit(&self) -> Vec<(C64, DiffOp)> {
        let mut out: Vec<(C64, DiffOp)> = Vec::new();
        for (c, w) in &self.terms {
            if let Some(op) = counit_word(w) {
                match out.iter_mut().find(|(_, o)| *o == op) {
                    Some(e) => e.0 += c,
                    None => out.push((*c, op)),
                }
            }
        }
        out.retain(|(c, _)| *c != C64::new(0.0, 0.0));
        out
    }
}

/// F(μ)/F(λ) as the letter pair [f(μ) = F, f(λ) = 1/F].
fn f_ratio_letters() -> Vec<Letter> {
    let f = CoefFn::f_fn();
    vec![Letter::Right(f.clone()), Letter::Left(f.inv())]
}

fn antipode_letter(l: &Letter, ctx: &ThetaContext) -> Element {
    let q2 = ctx.qpow_r(2.0);
    match l {
        Letter::Gen(g, z) => {
            let y = z / q2;
            let (sign, img) = match g {
                Gen::Alpha => (1.0, Letter::delta(y)),
                Gen::Beta => (-1.0, Letter::beta(y)),
                Gen::Gamma => (-1.0, Letter::gamma(y)),
                Gen::Delta => (1.0, Letter::alpha(y)),
            };
            let mut w = f_ratio_letters();
            w.push(Letter::DetInv(y));
            w.push(img);
            Element::word(w).scaled(C64::new(sign, 0.0))
        }
        Letter::DetInv(z) => det_element(*z, ctx),
        Letter::Left(f) => Element::letter(Letter::Right(f.clone())),
        Letter::Right(f) => Element::letter(Letter::Left(f.clone())),
    }
}

/// det(z) = F(μ)/F(λ)[α(z)δ(q²z) − γ(z)β(q²z)].
pub fn det_element(z: C64, ctx: &ThetaContext) -> Element {
    let q2 = ctx.qpow_r(2.0);
    let pre = Element::word(f_ratio_letters());
    let body = Element::word(vec![Letter::alpha(z), Letter::delta(q2 * z)])
        .sub(&Element::word(vec![Letter::gamma(z), Letter::beta(q2 * z)]));
    pre.mul(&body)
}

/// Formal sum of simple tensors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Tensor {
    pub terms: Vec<(C64, Word, Word)>,
}

impl Tensor {
    pub fn one() -> Self {
        Tensor {
            terms: vec![(C64::new(1.0, 0.0), Vec::new(), Vec::new())],
        }
    }

    pub fn mul(&self, o: &Tensor) -> Tensor {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (c1, a1, b1) in &self.terms {
            for (c2, a2, b2) in &o.terms {
                let mut a = a1.clone();
                a.extend(a2.iter().cloned());
                let mut b = b1.clone();
                b.extend(b2.iter().cloned());
                terms.push((c1 * c2, a, b));
            }
        }
        Tensor { terms }
    }
}

fn coproduct_letter(l: &Letter) -> Tensor {
    let one = C64::new(1.0, 0.0);
    let pair = |x: Letter, y: Letter| (one, vec![x], vec![y]);
    match l {
        Letter::Gen(g, z) => {
            let z = *z;
            let (a, b, c, d) = (
                Letter::alpha(z),
                Letter::beta(z),
                Letter::gamma(z),
                Letter::delta(z),
            );
            let terms = match g {
                Gen::Alpha => vec![pair(a.clone(), a), pair(b, c)],
                Gen::Beta => vec![pair(a, b.clone()), pair(b, d)],
                Gen::Gamma => vec![pair(c.clone(), a), pair(d, c)],
                Gen::Delta => vec![pair(c, b), pair(d.clone(), d)],
            };
            Tensor { terms }
        }
        Letter::DetInv(_) => Tensor {
            terms: vec![pair(l.clone(), l.clone())],
        },
        Letter::Left(_) => Tensor {
            terms: vec![(one, vec![l.clone()], Vec::new())],
        },
        Letter::Right(_) => Tensor {
            terms: vec![(one, Vec::new(), vec![l.clone()])],
        },
    }
}

/// The difference operator g ↦ f · T_shift g.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp {
    pub f: CoefFn,
    pub shift: i64,
}

impl DiffOp {
    pub fn identity() -> Self {
        DiffOp {
            f: CoefFn::one(),
            shift: 0,
        }
    }

    /// (f T_a)(g T_b) = f · (T_a g) T_{a+b}.
    pub fn compose(&self, o: &DiffOp) -> DiffOp {
        DiffOp {
            f: self.f.mul(&o.f.shift(C64::new(self.shift as f64, 0.0))),
            shift: self.shift + o.shift,
        }
    }
}

pub fn counit_letter(l: &Letter) -> Option<DiffOp> {
    match l {
        Letter::Gen(Gen::Alpha, _) => Some(DiffOp {
            f: CoefFn::one(),
            shift: -1,
        }),
        Letter::Gen(Gen::Delta, _) => Some(DiffOp {
            f: CoefFn::one(),
            shift: 1,
        }),
        Letter::Gen(_, _) => None,
        Letter::DetInv(_) => Some(DiffOp::identity()),
        Letter::Left(f) | Letter::Right(f) => Some(DiffOp {
            f: f.clone(),
            shift: 0,
        }),
    }
}

pub fn counit_word(w: &[Letter]) -> Option<DiffOp> {
    w.iter()
        .try_fold(DiffOp::identity(), |acc, l| Some(acc.compose(&counit_letter(l)?)))
}

fn fmt_c(z: &C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Gen(g, z) => write!(f, "{}({})", g.mnemonic(), fmt_c(z)),
            Letter::DetInv(z) => write!(f, "detinv({})", fmt_c(z)),
            Letter::Left(c) => write!(f, "L[{c}]"),
            Letter::Right(c) => write!(f, "R[{c}]"),
        }
    }
}

pub fn word_string(w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, w)| format!("({})*{}", fmt_c(c), word_string(w)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
