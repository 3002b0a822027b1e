//! Binary forms over a field: homogeneous polynomials in `x, y`.
//!
//! Coefficient `i` multiplies `x^i y^(m-i)`. Roots at infinity (`y = 0`) are
//! tracked through the power of `y` dividing a form, so every computation
//! dehomogenizes at `y = 1` and puts the missing degree back as a `y`-power.

use std::fmt;

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{degenerate, Result};
use crate::field::{parse_rat, rat_to_string, Field, Rat, RatStr};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryForm<F> {
    coeffs: Vec<F>,
}

impl<F: Field> BinaryForm<F> {
    /// A form of degree `coeffs.len() - 1`, taken as given (not normalized).
    pub fn new(coeffs: Vec<F>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm { coeffs: vec![F::zero(); degree + 1] }
    }

    pub fn x() -> Self {
        BinaryForm { coeffs: vec![F::zero(), F::one()] }
    }

    pub fn y() -> Self {
        BinaryForm { coeffs: vec![F::one(), F::zero()] }
    }

    /// `c·x^i·y^(m-i)`.
    pub fn monomial(c: F, i: usize, m: usize) -> Self {
        let mut coeffs = vec![F::zero(); m + 1];
        coeffs[i] = c;
        BinaryForm { coeffs }
    }

    /// Homogenizes `p(x)` to degree `m ≥ deg p`.
    pub fn homogenize(p: &Poly<F>, m: usize) -> Self {
        let d = p.degree().unwrap_or(0);
        assert!(d <= m, "homogenizing degree {d} polynomial to degree {m}");
        let mut coeffs = p.coeffs().to_vec();
        coeffs.resize(m + 1, F::zero());
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &F {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Highest power of `x` present; `None` for the zero form.
    pub fn x_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Exponent of the largest power of `y` dividing the form.
    pub fn y_power(&self) -> Option<usize> {
        self.x_degree().map(|d| self.degree() - d)
    }

    /// Exponent of the largest power of `x` dividing the form.
    pub fn x_power(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// The polynomial `f(x, 1)`.
    pub fn dehomogenize(&self) -> Poly<F> {
        Poly::new(self.coeffs.clone())
    }

    /// Canonical representative: divided by [`Field::normalizer`]. The zero
    /// form is returned unchanged.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let s = F::normalizer(&self.coeffs);
        BinaryForm {
            coeffs: self.coeffs.iter().map(|c| c.clone() / s.clone()).collect(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        !self.is_zero() && F::normalizer(&self.coeffs).is_one()
    }

    pub fn scale(&self, s: &F) -> Self {
        BinaryForm { coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.degree() != o.degree() {
            return degenerate(format!(
                "adding forms of degrees {} and {}",
                self.degree(),
                o.degree()
            ));
        }
        Ok(BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = vec![F::zero(); self.degree() + o.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = BinaryForm { coeffs: vec![F::one()] };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() || d.degree() > self.degree() {
            return None;
        }
        let m = self.degree() - d.degree();
        if self.is_zero() {
            return Some(Self::zero(m));
        }
        let (ya, yd) = (self.y_power()?, d.y_power()?);
        if yd > ya {
            return None;
        }
        let q = self.dehomogenize().exact_div(&d.dehomogenize())?;
        Some(Self::homogenize(&q, m))
    }

    /// Value at the point `[a : b]`.
    pub fn eval(&self, a: &F, b: &F) -> F {
        let m = self.degree();
        let mut acc = F::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for _ in 0..i {
                term = term * a.clone();
            }
            for _ in 0..(m - i) {
                term = term * b.clone();
            }
            acc = acc + term;
        }
        acc
    }

    /// Applies `h` to every coefficient.
    pub fn map<G: Field>(&self, h: impl Fn(&F) -> G) -> BinaryForm<G> {
        BinaryForm { coeffs: self.coeffs.iter().map(h).collect() }
    }
}

impl BinaryForm<Rat> {
    pub fn from_ints(cs: &[i64]) -> Self {
        BinaryForm::new(cs.iter().map(|&c| crate::field::int(c)).collect())
    }

    /// Linear form vanishing exactly at `p`.
    pub fn vanishing_at(p: &RationalPoint) -> Self {
        // p.y·x − p.x·y
        BinaryForm::new(vec![-p.x.clone(), p.y.clone()]).normalize()
    }
}

impl<F: Field + fmt::Display> fmt::Display for BinaryForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let m = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
            match m - i {
                0 => {}
                1 => write!(f, "y")?,
                k => write!(f, "y^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for BinaryForm<Rat> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(rat_to_string).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryForm<Rat> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<RatStr> = Vec::deserialize(d)?;
        if v.is_empty() {
            return Err(D::Error::custom("binary form needs at least one coefficient"));
        }
        Ok(BinaryForm::new(v.into_iter().map(|r| r.0).collect()))
    }
}

/// Normalizes a raw coefficient list, refusing the empty list.
pub fn normalize<F: Field>(coeffs: Vec<F>) -> Result<BinaryForm<F>> {
    if coeffs.is_empty() {
        return degenerate("empty coefficient list");
    }
    Ok(BinaryForm::new(coeffs).normalize())
}

/// Normalized gcd, including the correct power of `y`.
pub fn gcd_forms<F: Field>(f: &BinaryForm<F>, g: &BinaryForm<F>) -> Result<BinaryForm<F>> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => degenerate("gcd of two zero forms"),
        (false, true) => Ok(f.normalize()),
        (true, false) => Ok(g.normalize()),
        (false, false) => {
            let a = f.y_power().unwrap().min(g.y_power().unwrap());
            let p = f.dehomogenize().gcd(&g.dehomogenize());
            let d = p.degree().unwrap_or(0);
            Ok(BinaryForm::homogenize(&p, d + a).normalize())
        }
    }
}

/// Gcd of a list of forms, ignoring zero entries. Errors if all are zero.
pub fn gcd_all<F: Field>(forms: &[BinaryForm<F>]) -> Result<BinaryForm<F>> {
    let mut nonzero = forms.iter().filter(|f| !f.is_zero());
    let Some(first) = nonzero.next() else {
        return degenerate("gcd of an all-zero list");
    };
    nonzero.try_fold(first.normalize(), |acc, f| gcd_forms(&acc, f))
}

/// Pairwise coprime squarefree refinement of a list of polynomials: every
/// input is a unit times a product of powers of the returned elements.
/// Constants are dropped; the output is normalized and sorted.
pub(crate) fn gcd_free_basis<F: Field>(polys: &[Poly<F>]) -> Vec<Poly<F>> {
    let mut work: Vec<Poly<F>> = polys
        .iter()
        .filter(|p| p.degree().unwrap_or(0) > 0)
        .map(|p| p.monic())
        .collect();
    'outer: loop {
        for i in 0..work.len() {
            let d = work[i].gcd(&work[i].derivative());
            if d.degree().unwrap_or(0) > 0 {
                let q = work[i].div_rem(&d).0;
                work[i] = q;
                work.push(d);
                continue 'outer;
            }
            for j in (i + 1)..work.len() {
                let g = work[i].gcd(&work[j]);
                if g.degree().unwrap_or(0) == 0 {
                    continue;
                }
                let a = work[i].div_rem(&g).0;
                let b = work[j].div_rem(&g).0;
                work.remove(j);
                work.remove(i);
                work.extend([a, b, g].into_iter().filter(|p| p.degree().unwrap_or(0) > 0));
                continue 'outer;
            }
        }
        break;
    }
    let mut out: Vec<Poly<F>> = work
        .into_iter()
        .map(|p| {
            let d = p.degree().unwrap();
            BinaryForm::homogenize(&p, d).normalize().dehomogenize()
        })
        .collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

/// Multiplicity with which the squarefree `b` divides `p`.
pub(crate) fn multiplicity_in<F: Field>(b: &Poly<F>, p: &Poly<F>) -> u32 {
    let mut e = 0;
    let mut cur = p.clone();
    while let Some(q) = cur.exact_div(b) {
        e += 1;
        cur = q;
    }
    e
}

/// Squarefree, pairwise coprime, normalized basis of a list of nonzero forms
/// together with the exponent matrix: `forms[i] = unit · Π basis[j]^exps[i][j]`.
/// The form `y` appears in the basis when some input vanishes at infinity.
pub fn coprime_squarefree_basis<F: Field>(
    forms: &[BinaryForm<F>],
) -> Result<(Vec<BinaryForm<F>>, Vec<Vec<u32>>)> {
    if forms.iter().any(|f| f.is_zero()) {
        return degenerate("zero form in squarefree basis input");
    }
    let polys: Vec<Poly<F>> = forms.iter().map(|f| f.dehomogenize()).collect();
    let finite = gcd_free_basis(&polys);
    let y_pows: Vec<u32> = forms.iter().map(|f| f.y_power().unwrap() as u32).collect();
    let with_inf = y_pows.iter().any(|&a| a > 0);
    let mut basis: Vec<BinaryForm<F>> = Vec::new();
    if with_inf {
        basis.push(BinaryForm::y());
    }
    basis.extend(finite.iter().map(|p| BinaryForm::homogenize(p, p.degree().unwrap())));
    let exps = polys
        .iter()
        .zip(&y_pows)
        .map(|(p, &a)| {
            let mut row = Vec::with_capacity(basis.len());
            if with_inf {
                row.push(a);
            }
            row.extend(finite.iter().map(|b| multiplicity_in(b, p)));
            row
        })
        .collect();
    Ok((basis, exps))
}

/// A point of ℙ¹ over ℚ, normalized to `[a : 1]` or `[1 : 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    x: Rat,
    y: Rat,
}

impl RationalPoint {
    pub fn new(x: Rat, y: Rat) -> Result<Self> {
        if y.is_zero() {
            if x.is_zero() {
                return degenerate("[0 : 0] is not a point");
            }
            return Ok(Self::infinity());
        }
        Ok(RationalPoint { x: x / y, y: Rat::one() })
    }

    pub fn affine(a: Rat) -> Self {
        RationalPoint { x: a, y: Rat::one() }
    }

    pub fn infinity() -> Self {
        RationalPoint { x: Rat::one(), y: Rat::zero() }
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y(&self) -> &Rat {
        &self.y
    }

    /// Parses `a/b` (affine coordinate) or `inf`.
    pub fn parse(s: &str) -> Option<Self> {
        if s.trim() == "inf" {
            Some(Self::infinity())
        } else {
            parse_rat(s).map(Self::affine)
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}", rat_to_string(&self.x))
        }
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RationalPoint::parse(&s).ok_or_else(|| D::Error::custom(format!("bad point {s:?}")))
    }
}

/// Vanishing order of `f` at `p`.
pub fn ord_at(f: &BinaryForm<Rat>, p: &RationalPoint) -> Result<u32> {
    if f.is_zero() {
        return degenerate("order of the zero form");
    }
    if p.is_infinity() {
        return Ok(f.y_power().unwrap() as u32);
    }
    Ok(multiplicity_in(&Poly::linear_root(p.x.clone()), &f.dehomogenize()))
}

/// An `l`-th root of `f` up to scalar, when one exists over the base field.
pub fn lth_root<F: Field>(f: &BinaryForm<F>, l: u32) -> Result<Option<BinaryForm<F>>> {
    if f.is_zero() {
        return degenerate("root of the zero form");
    }
    if l == 0 || f.degree() % l as usize != 0 {
        return degenerate(format!("{l} does not divide degree {}", f.degree()));
    }
    let (basis, exps) = coprime_squarefree_basis(std::slice::from_ref(f))?;
    if exps[0].iter().any(|e| e % l != 0) {
        return Ok(None);
    }
    let mut g = BinaryForm::new(vec![F::one()]);
    for (b, e) in basis.iter().zip(&exps[0]) {
        g = g.mul(&b.pow(e / l));
    }
    let g = g.normalize();
    // g^l and f agree up to a scalar by construction; confirm it.
    let lifted = g.pow(l);
    if lifted.normalize() != f.normalize() {
        return Ok(None);
    }
    Ok(Some(g))
}

/// Invertible 2×2 matrix acting on forms by `f ↦ f(a·x + b·y, c·x + d·y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusMatrix<F> {
    m: [[F; 2]; 2],
}

impl<F: Field> MobiusMatrix<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> Result<Self> {
        let m = MobiusMatrix { m: [[a, b], [c, d]] };
        if m.det().is_zero() {
            return degenerate("singular Möbius matrix");
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        MobiusMatrix { m: [[F::one(), F::zero()], [F::zero(), F::one()]] }
    }

    pub fn swap() -> Self {
        MobiusMatrix { m: [[F::zero(), F::one()], [F::one(), F::zero()]] }
    }

    /// `x ↦ x + a·y`, which moves the affine point `a` to `0`.
    pub fn translation(a: F) -> Self {
        MobiusMatrix { m: [[F::one(), a], [F::zero(), F::one()]] }
    }

    pub fn entries(&self) -> &[[F; 2]; 2] {
        &self.m
    }

    pub fn det(&self) -> F {
        self.m[0][0].clone() * self.m[1][1].clone() - self.m[0][1].clone() * self.m[1][0].clone()
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        let [[a, b], [c, e]] = self.m.clone();
        MobiusMatrix {
            m: [[e / d.clone(), -b / d.clone()], [-c / d.clone(), a / d]],
        }
    }

    /// Matrix product `self · o`; substituting by the product equals
    /// substituting by `self` and then by `o`.
    pub fn compose(&self, o: &Self) -> Self {
        let p = |i: usize, j: usize| {
            self.m[i][0].clone() * o.m[0][j].clone() + self.m[i][1].clone() * o.m[1][j].clone()
        };
        MobiusMatrix { m: [[p(0, 0), p(0, 1)], [p(1, 0), p(1, 1)]] }
    }

    /// Image of the column vector `(a, b)`.
    pub fn apply_coords(&self, a: &F, b: &F) -> (F, F) {
        (
            self.m[0][0].clone() * a.clone() + self.m[0][1].clone() * b.clone(),
            self.m[1][0].clone() * a.clone() + self.m[1][1].clone() * b.clone(),
        )
    }

    /// The substitution without normalization.
    pub fn substitute(&self, f: &BinaryForm<F>) -> BinaryForm<F> {
        let m = f.degree();
        let lx = BinaryForm::new(vec![self.m[0][1].clone(), self.m[0][0].clone()]);
        let ly = BinaryForm::new(vec![self.m[1][1].clone(), self.m[1][0].clone()]);
        let xp: Vec<BinaryForm<F>> = powers(&lx, m);
        let yp: Vec<BinaryForm<F>> = powers(&ly, m);
        let mut acc = BinaryForm::zero(m);
        for (i, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = xp[i].mul(&yp[m - i]).scale(c);
            acc = acc.add(&term).expect("same degree");
        }
        acc
    }
}

impl MobiusMatrix<Rat> {
    pub fn apply_point(&self, p: &RationalPoint) -> RationalPoint {
        let (a, b) = self.apply_coords(&p.x, &p.y);
        RationalPoint::new(a, b).expect("invertible map sends points to points")
    }

    /// The unique map sending `src[k]` to `dst[k]`, for distinct triples.
    pub fn from_three_points(src: [&RationalPoint; 3], dst: [&RationalPoint; 3]) -> Result<Self> {
        let a = Self::standard_frame(src)?;
        let b = Self::standard_frame(dst)?;
        Ok(b.compose(&a.inverse()))
    }

    /// Map sending `[1:0], [0:1], [1:1]` to the given three points.
    fn standard_frame(p: [&RationalPoint; 3]) -> Result<Self> {
        // Columns λ·p0, μ·p1 with λ·p0 + μ·p1 = p2.
        let (x0, y0) = (&p[0].x, &p[0].y);
        let (x1, y1) = (&p[1].x, &p[1].y);
        let (x2, y2) = (&p[2].x, &p[2].y);
        let det = x0 * y1 - x1 * y0;
        if det.is_zero() {
            return degenerate("points are not distinct");
        }
        let lam = (x2 * y1 - x1 * y2) / &det;
        let mu = (x0 * y2 - x2 * y0) / &det;
        if lam.is_zero() || mu.is_zero() {
            return degenerate("points are not distinct");
        }
        MobiusMatrix::new(&lam * x0, &mu * x1, &lam * y0, &mu * y1)
    }
}

fn powers<F: Field>(l: &BinaryForm<F>, m: usize) -> Vec<BinaryForm<F>> {
    let mut out = Vec::with_capacity(m + 1);
    out.push(BinaryForm::new(vec![F::one()]));
    for k in 1..=m {
        let next = out[k - 1].mul(l);
        out.push(next);
    }
    out
}

/// Substitutes `(x, y) → M(x, y)` and normalizes.
pub fn apply_mobius<F: Field>(f: &BinaryForm<F>, m: &MobiusMatrix<F>) -> Result<BinaryForm<F>> {
    if m.det().is_zero() {
        return degenerate("singular Möbius matrix");
    }
    Ok(m.substitute(f).normalize())
}

/// Homogeneous polynomial in `N + 1` variables with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiPoly {
    pub terms: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    #[serde(with = "rat_string")]
    pub coeff: Rat,
    pub exps: Vec<u32>,
}

impl MultiPoly {
    pub fn new(terms: Vec<(Rat, Vec<u32>)>) -> Self {
        MultiPoly {
            terms: terms.into_iter().map(|(coeff, exps)| Monomial { coeff, exps }).collect(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.exps.iter().sum())
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.total_degree();
        self.terms.iter().all(|t| Some(t.exps.iter().sum()) == d)
    }

    /// `g(f_0, …, f_N)`.
    pub fn evaluate<F: Field>(&self, sections: &[BinaryForm<F>]) -> Result<BinaryForm<F>> {
        let m = sections.first().map(|f| f.degree()).unwrap_or(0);
        let d = self.total_degree().unwrap_or(0) as usize;
        let mut acc = BinaryForm::zero(m * d);
        for t in &self.terms {
            if t.exps.len() != sections.len() {
                return degenerate(format!(
                    "generator term in {} variables, {} sections",
                    t.exps.len(),
                    sections.len()
                ));
            }
            let mut prod = BinaryForm::new(vec![F::from_rat(&t.coeff)]);
            for (f, &e) in sections.iter().zip(&t.exps) {
                if e > 0 {
                    prod = prod.mul(&f.pow(e));
                }
            }
            acc = acc.add(&prod)?;
        }
        Ok(acc)
    }
}

/// True iff every generator vanishes identically on the sections.
pub fn evaluate_ideal<F: Field>(generators: &[MultiPoly], sections: &[BinaryForm<F>]) -> Result<bool> {
    if let Some(first) = sections.first() {
        if sections.iter().any(|f| f.degree() != first.degree()) {
            return degenerate("sections of unequal degree");
        }
    }
    for g in generators {
        if !g.is_homogeneous() {
            return degenerate("inhomogeneous generator");
        }
        if !g.evaluate(sections)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) mod rat_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::field::{rat_to_string, Rat, RatStr};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        RatStr::deserialize(d).map(|r| r.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};

    fn bf(cs: &[i64]) -> BinaryForm<Rat> {
        BinaryForm::from_ints(cs)
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(vec![int(4), int(2)]).unwrap(), bf(&[2, 1]));
        let z = normalize(vec![int(0), int(0), int(0)]).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 2);
        // 3x² − 3y²: first nonzero (lowest x-power) coefficient made positive.
        let n = normalize(vec![int(-3), int(0), int(3)]).unwrap();
        assert_eq!(n, bf(&[1, 0, -1]));
        assert_eq!(n.scale(&int(-1)), bf(&[-1, 0, 1]));
        assert_eq!(normalize(vec![rat(1, 2), rat(-3, 4)]).unwrap(), bf(&[2, -3]));
    }

    #[test]
    fn gcd_examples() {
        // x²y, xy²
        assert_eq!(gcd_forms(&bf(&[0, 0, 1, 0]), &bf(&[0, 1, 0, 0])).unwrap(), bf(&[0, 1, 0]));
        // x³ − xy² and x² − 2xy + y²
        let g = gcd_forms(&bf(&[0, -1, 0, 1]), &bf(&[1, -2, 1])).unwrap();
        assert_eq!(g, bf(&[-1, 1]).normalize());
        let f = bf(&[6, 4]);
        assert_eq!(gcd_forms(&f, &BinaryForm::zero(1)).unwrap(), bf(&[3, 2]));
        assert!(gcd_forms(&BinaryForm::<Rat>::zero(1), &BinaryForm::zero(2)).is_err());
        // y-powers: y³ and xy²
        assert_eq!(gcd_forms(&bf(&[1, 0, 0, 0]), &bf(&[0, 1, 0, 0])).unwrap(), bf(&[1, 0, 0]));
    }

    #[test]
    fn basis_examples() {
        let (b, e) = coprime_squarefree_basis(&[bf(&[0, 0, 1, 0]), bf(&[0, 1, 0, 0, 0])]).unwrap();
        assert_eq!(b, vec![bf(&[1, 0]), bf(&[0, 1])]);
        assert_eq!(e, vec![vec![1, 2], vec![3, 1]]);

        let (b, e) = coprime_squarefree_basis(&[bf(&[-1, 0, 1]), bf(&[1, -2, 1])]).unwrap();
        // x − y normalizes to y − x (lowest x-power positive), x + y to y + x.
        assert_eq!(b, vec![bf(&[1, -1]), bf(&[1, 1])]);
        assert_eq!(e, vec![vec![1, 1], vec![2, 0]]);

        let (b, e) = coprime_squarefree_basis(&[bf(&[1, 0, 1])]).unwrap();
        assert_eq!(b, vec![bf(&[1, 0, 1])]);
        assert_eq!(e, vec![vec![1]]);
        assert!(coprime_squarefree_basis(&[BinaryForm::<Rat>::zero(2)]).is_err());
    }

    #[test]
    fn ord_examples() {
        // x²(x − y)
        assert_eq!(ord_at(&bf(&[0, 0, -1, 1]), &RationalPoint::affine(int(0))).unwrap(), 2);
        assert_eq!(ord_at(&bf(&[0, 0, 0, 1]), &RationalPoint::infinity()).unwrap(), 0);
        // x²y⁴
        assert_eq!(ord_at(&bf(&[0, 0, 1, 0, 0, 0, 0]), &RationalPoint::infinity()).unwrap(), 4);
        assert!(ord_at(&BinaryForm::zero(2), &RationalPoint::infinity()).is_err());
    }

    #[test]
    fn root_examples() {
        assert_eq!(lth_root(&bf(&[1, 2, 1]), 2).unwrap(), Some(bf(&[1, 1])));
        assert_eq!(lth_root(&bf(&[1, 0, 1]), 2).unwrap(), None);
        // x³ − 3x²y + 3xy² − y³ = (x − y)³
        assert_eq!(lth_root(&bf(&[-1, 3, -3, 1]), 3).unwrap(), Some(bf(&[1, -1])));
        assert!(lth_root(&bf(&[1, 0, 1]), 3).is_err());
        // scalar multiples still have roots up to scalar
        assert_eq!(lth_root(&bf(&[0, 0, 2]), 2).unwrap(), Some(bf(&[0, 1])));
    }

    #[test]
    fn mobius_examples() {
        let x = bf(&[0, 1]);
        assert_eq!(apply_mobius(&x, &MobiusMatrix::identity()).unwrap(), x);
        assert_eq!(apply_mobius(&x, &MobiusMatrix::swap()).unwrap(), bf(&[1, 0]));
        let shift = MobiusMatrix::new(int(1), int(1), int(0), int(1)).unwrap();
        assert_eq!(apply_mobius(&bf(&[-1, 1]), &shift).unwrap(), x);
        assert!(MobiusMatrix::new(int(1), int(2), int(2), int(4)).is_err());
    }

    #[test]
    fn three_point_maps() {
        let p = |a: i64| RationalPoint::affine(int(a));
        let inf = RationalPoint::infinity();
        let src = [&p(0), &p(1), &inf];
        let dst = [&p(2), &inf, &p(5)];
        let m = MobiusMatrix::from_three_points(src, dst).unwrap();
        for (s, d) in src.iter().zip(dst) {
            assert_eq!(&m.apply_point(s), d);
        }
        assert!(MobiusMatrix::from_three_points([&p(0), &p(0), &inf], dst).is_err());
    }

    #[test]
    fn ideal_examples() {
        let conic = MultiPoly::new(vec![(int(1), vec![1, 0, 1]), (int(-1), vec![0, 2, 0])]);
        let ver = [bf(&[0, 0, 1]), bf(&[0, 1, 0]), bf(&[1, 0, 0])];
        assert!(evaluate_ideal(std::slice::from_ref(&conic), &ver).unwrap());
        let bad = [bf(&[0, 0, 1]), bf(&[0, 1, 0]), bf(&[0, 0, 1])];
        assert!(!evaluate_ideal(std::slice::from_ref(&conic), &bad).unwrap());
        assert!(evaluate_ideal(&[], &bad).unwrap());
        assert!(evaluate_ideal(&[conic], &[bf(&[0, 1]), bf(&[0, 0, 1]), bf(&[1, 0])]).is_err());
    }

    #[test]
    fn json_form() {
        let f: BinaryForm<Rat> = serde_json::from_str(r#"["-1/2","0","1"]"#).unwrap();
        assert_eq!(f, BinaryForm::new(vec![rat(-1, 2), int(0), int(1)]));
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"["-1/2","0","1"]"#);
    }
}
