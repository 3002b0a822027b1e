//! ℚ-divisors on ℙ¹ supported on clusters of geometric points.
//!
//! A cluster is a squarefree form; all of its geometric roots carry the same
//! coefficient, so multiplicity queries never need an irreducible
//! factorization.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::binform::{gcd_free_basis, multiplicity_in, BinaryForm, MobiusMatrix, RationalPoint};
use crate::error::{degenerate, Result};
use crate::field::{Field, Rat};
use crate::poly::Poly;

/// A squarefree normalized form, or the point at infinity (the form `y`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cluster<F> {
    Infinity,
    /// Dehomogenized squarefree form of positive degree, not divisible by `y`.
    Finite(Poly<F>),
}

impl<F: Field> Cluster<F> {
    pub fn degree(&self) -> usize {
        match self {
            Cluster::Infinity => 1,
            Cluster::Finite(p) => p.degree().unwrap(),
        }
    }

    pub fn form(&self) -> BinaryForm<F> {
        match self {
            Cluster::Infinity => BinaryForm::y(),
            Cluster::Finite(p) => BinaryForm::homogenize(p, p.degree().unwrap()),
        }
    }

    /// Order of vanishing of `f` along the cluster.
    pub fn order_in(&self, f: &BinaryForm<F>) -> u32 {
        match self {
            Cluster::Infinity => f.y_power().unwrap_or(0) as u32,
            Cluster::Finite(p) => multiplicity_in(p, &f.dehomogenize()),
        }
    }
}

impl Cluster<Rat> {
    /// The point itself when the cluster has degree one.
    pub fn rational_point(&self) -> Option<RationalPoint> {
        match self {
            Cluster::Infinity => Some(RationalPoint::infinity()),
            Cluster::Finite(p) if p.degree() == Some(1) => {
                Some(RationalPoint::affine(-p.coeff(0) / p.coeff(1)))
            }
            Cluster::Finite(_) => None,
        }
    }

    pub fn rational_points(&self) -> Vec<RationalPoint> {
        match self {
            Cluster::Infinity => vec![RationalPoint::infinity()],
            Cluster::Finite(p) => p.rational_roots().into_iter().map(RationalPoint::affine).collect(),
        }
    }

    pub fn contains(&self, pt: &RationalPoint) -> bool {
        match self {
            Cluster::Infinity => pt.is_infinity(),
            Cluster::Finite(p) => !pt.is_infinity() && p.eval(pt.x()).is_zero(),
        }
    }
}

impl<F: Field> PartialOrd for Cluster<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, the point at infinity before affine points of degree one,
/// then lexicographic in the coefficients.
impl<F: Field> Ord for Cluster<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| match (self, other) {
            (Cluster::Infinity, Cluster::Infinity) => Ordering::Equal,
            (Cluster::Infinity, _) => Ordering::Less,
            (_, Cluster::Infinity) => Ordering::Greater,
            (Cluster::Finite(a), Cluster::Finite(b)) => a.coeffs().cmp(b.coeffs()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QDivisor<F> {
    terms: Vec<(Cluster<F>, Rat)>,
}

impl<F: Field> Default for QDivisor<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> QDivisor<F> {
    pub fn zero() -> Self {
        QDivisor { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(Cluster<F>, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Rat {
        self.terms
            .iter()
            .map(|(c, a)| a * Rat::from_integer(c.degree().into()))
            .sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.iter().all(|(_, a)| a.is_positive())
    }

    /// Coefficient carried by every root of `cluster`, when it is a basis element.
    pub fn coefficient(&self, cluster: &Cluster<F>) -> Rat {
        self.terms
            .iter()
            .find(|(c, _)| c == cluster)
            .map(|(_, a)| a.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Pullback along `(x, y) ↦ M(x, y)`.
    pub fn transform(&self, m: &MobiusMatrix<F>) -> Self {
        let pairs: Vec<(BinaryForm<F>, Rat)> = self
            .terms
            .iter()
            .map(|(c, a)| (m.substitute(&c.form()), a.clone()))
            .collect();
        divisor_from(&pairs).expect("Möbius images of clusters are nonzero")
    }

    pub fn map<G: Field>(&self, h: impl Fn(&F) -> G) -> QDivisor<G> {
        let pairs: Vec<(BinaryForm<G>, Rat)> =
            self.terms.iter().map(|(c, a)| (c.form().map(&h), a.clone())).collect();
        divisor_from(&pairs).expect("coefficient maps keep forms nonzero")
    }

    pub fn scale(&self, s: &Rat) -> Self {
        combine(self, &Self::zero(), s, &Rat::zero())
    }
}

/// `Σ cᵢ·div(fᵢ)`, re-based onto a coprime squarefree basis.
pub fn divisor_from<F: Field>(pairs: &[(BinaryForm<F>, Rat)]) -> Result<QDivisor<F>> {
    if pairs.iter().any(|(f, _)| f.is_zero()) {
        return degenerate("zero form in divisor");
    }
    let polys: Vec<Poly<F>> = pairs.iter().map(|(f, _)| f.dehomogenize()).collect();
    let basis = gcd_free_basis(&polys);
    let mut terms = Vec::new();
    let inf: Rat = pairs
        .iter()
        .map(|(f, c)| c * Rat::from_integer(f.y_power().unwrap().into()))
        .sum();
    if !inf.is_zero() {
        terms.push((Cluster::Infinity, inf));
    }
    // Finite roots sharing a coefficient form a single cluster, so the
    // representation does not depend on how the input was factored.
    let mut by_coeff: Vec<(Rat, Poly<F>)> = Vec::new();
    for b in basis {
        let coeff: Rat = pairs
            .iter()
            .zip(&polys)
            .map(|((_, c), p)| c * Rat::from_integer(multiplicity_in(&b, p).into()))
            .sum();
        if coeff.is_zero() {
            continue;
        }
        match by_coeff.iter_mut().find(|(a, _)| *a == coeff) {
            Some((_, acc)) => *acc = acc.mul(&b),
            None => by_coeff.push((coeff, b)),
        }
    }
    for (coeff, p) in by_coeff {
        let d = p.degree().unwrap();
        let p = BinaryForm::homogenize(&p, d).normalize().dehomogenize();
        terms.push((Cluster::Finite(p), coeff));
    }
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(QDivisor { terms })
}

/// `s·a + t·b` on a common basis.
pub fn combine<F: Field>(a: &QDivisor<F>, b: &QDivisor<F>, s: &Rat, t: &Rat) -> QDivisor<F> {
    let pairs: Vec<(BinaryForm<F>, Rat)> = a
        .terms
        .iter()
        .map(|(c, x)| (c.form(), x * s))
        .chain(b.terms.iter().map(|(c, x)| (c.form(), x * t)))
        .filter(|(_, x)| !x.is_zero())
        .collect();
    divisor_from(&pairs).expect("cluster forms are nonzero")
}

/// Largest multiplicity at a geometric point, with the first cluster (in
/// canonical order) attaining it. Points off the support count as zero.
pub fn max_multiplicity<F: Field>(d: &QDivisor<F>) -> (Rat, Option<Cluster<F>>) {
    let mut best = (Rat::zero(), None);
    for (c, a) in &d.terms {
        if a > &best.0 {
            best = (a.clone(), Some(c.clone()));
        }
    }
    best
}

pub fn multiplicity_at(d: &QDivisor<Rat>, p: &RationalPoint) -> Rat {
    d.terms
        .iter()
        .filter(|(c, _)| c.contains(p))
        .map(|(_, a)| a.clone())
        .sum()
}

impl QDivisor<Rat> {
    /// Rational points of the support with their coefficients.
    pub fn rational_support(&self) -> Vec<(RationalPoint, Rat)> {
        let mut out: Vec<(RationalPoint, Rat)> = self
            .terms
            .iter()
            .flat_map(|(c, a)| c.rational_points().into_iter().map(move |p| (p, a.clone())))
            .collect();
        out.sort();
        out
    }

    /// Integral `r·D` check.
    pub fn is_integral_multiple(&self, r: u32) -> bool {
        let r = Rat::from_integer(r.into());
        self.terms.iter().all(|(_, a)| (a * &r).is_integer())
    }

    pub fn point(p: &RationalPoint, coeff: Rat) -> Self {
        divisor_from(&[(BinaryForm::vanishing_at(p), coeff)]).expect("linear form is nonzero")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    form: FormJson,
    #[serde(with = "crate::binform::rat_string")]
    coeff: Rat,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FormJson {
    Inf(InfTag),
    Form(BinaryForm<Rat>),
}

#[derive(Serialize, Deserialize)]
enum InfTag {
    #[serde(rename = "inf")]
    Inf,
}

impl Serialize for QDivisor<Rat> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(c, a)| TermJson {
                form: match c {
                    Cluster::Infinity => FormJson::Inf(InfTag::Inf),
                    Cluster::Finite(_) => FormJson::Form(c.form()),
                },
                coeff: a.clone(),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QDivisor<Rat> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<TermJson> = Vec::deserialize(d)?;
        let pairs: Vec<(BinaryForm<Rat>, Rat)> = v
            .into_iter()
            .map(|t| {
                let f = match t.form {
                    FormJson::Inf(_) => BinaryForm::y(),
                    FormJson::Form(f) => f,
                };
                (f, t.coeff)
            })
            .collect();
        divisor_from(&pairs).map_err(D::Error::custom)
    }
}

impl Serialize for Cluster<Rat> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cluster::Infinity => s.serialize_str("inf"),
            Cluster::Finite(_) => self.form().serialize(s),
        }
    }
}

/// Convenience for tests and examples: one term per `(form, coefficient)`.
pub fn divisor<F: Field>(pairs: Vec<(BinaryForm<F>, Rat)>) -> QDivisor<F> {
    divisor_from(&pairs).expect("nonzero forms")
}

impl<F: Field> QDivisor<F> {
    /// Sum of `coefficient × degree` over clusters whose coefficient is `c`.
    pub fn mass_with_coefficient(&self, c: &Rat) -> usize {
        self.terms.iter().filter(|(_, a)| a == c).map(|(cl, _)| cl.degree()).sum()
    }

    pub fn clusters_with_coefficient(&self, c: &Rat) -> Vec<&Cluster<F>> {
        self.terms.iter().filter(|(_, a)| a == c).map(|(cl, _)| cl).collect()
    }

    /// True when all coefficients are one.
    pub fn is_reduced(&self) -> bool {
        self.terms.iter().all(|(_, a)| a.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};

    fn bf(cs: &[i64]) -> BinaryForm<Rat> {
        BinaryForm::from_ints(cs)
    }

    fn x() -> BinaryForm<Rat> {
        bf(&[0, 1])
    }

    fn y() -> BinaryForm<Rat> {
        bf(&[1, 0])
    }

    fn cl(f: BinaryForm<Rat>) -> Cluster<Rat> {
        if f.normalize() == y() {
            Cluster::Infinity
        } else {
            Cluster::Finite(f.normalize().dehomogenize())
        }
    }

    #[test]
    fn from_pairs() {
        let d = divisor_from(&[(bf(&[0, 0, 1]), rat(1, 2))]).unwrap();
        assert_eq!(d.terms(), &[(cl(x()), int(1))]);

        // (x² − y², 1/2) + ((x − y)², 1/4)
        let d = divisor_from(&[(bf(&[-1, 0, 1]), rat(1, 2)), (bf(&[1, -2, 1]), rat(1, 4))]).unwrap();
        assert_eq!(d.coefficient(&cl(bf(&[-1, 1]))), int(1));
        assert_eq!(d.coefficient(&cl(bf(&[1, 1]))), rat(1, 2));
        assert_eq!(d.terms().len(), 2);

        assert!(divisor_from::<Rat>(&[]).unwrap().is_zero());
        assert!(divisor_from(&[(BinaryForm::<Rat>::zero(1), int(1))]).is_err());
    }

    #[test]
    fn combine_examples() {
        let d = divisor(vec![(bf(&[1, 0, 3]), rat(2, 3))]);
        assert!(combine(&d, &d, &int(1), &int(-1)).is_zero());

        let dx = divisor(vec![(x(), int(1))]);
        let dy = divisor(vec![(y(), int(1))]);
        let c = combine(&dx, &dy, &rat(1, 2), &rat(1, 2));
        assert_eq!(c.terms(), &[(Cluster::Infinity, rat(1, 2)), (cl(x()), rat(1, 2))]);

        // x² + xy = x(x + y)
        let a = divisor(vec![(bf(&[0, 1, 1]), int(1))]);
        let c = combine(&a, &dx, &int(1), &int(1));
        assert_eq!(c.coefficient(&cl(x())), int(2));
        assert_eq!(c.coefficient(&cl(bf(&[1, 1]))), int(1));
        assert_eq!(c.degree(), int(3));
    }

    #[test]
    fn max_multiplicity_examples() {
        let d = divisor(vec![(x(), rat(1, 2)), (y(), rat(1, 3))]);
        assert_eq!(max_multiplicity(&d), (rat(1, 2), Some(cl(x()))));
        let d = divisor(vec![(bf(&[1, 0, 1]), rat(3, 4))]);
        let (m, w) = max_multiplicity(&d);
        assert_eq!(m, rat(3, 4));
        assert_eq!(w.unwrap().degree(), 2);
        assert_eq!(max_multiplicity(&QDivisor::<Rat>::zero()), (int(0), None));
    }

    #[test]
    fn multiplicity_at_examples() {
        let d = divisor(vec![(x(), rat(1, 2))]);
        assert_eq!(multiplicity_at(&d, &RationalPoint::affine(int(0))), rat(1, 2));
        assert_eq!(multiplicity_at(&d, &RationalPoint::affine(int(1))), int(0));
        let d = divisor(vec![(bf(&[-1, 0, 1]), rat(1, 3))]);
        assert_eq!(multiplicity_at(&d, &RationalPoint::affine(int(1))), rat(1, 3));
        let d = divisor(vec![(bf(&[1, 0, 0]), rat(1, 5))]);
        assert_eq!(multiplicity_at(&d, &RationalPoint::infinity()), rat(2, 5));
    }

    #[test]
    fn json_round_trip() {
        let d = divisor(vec![(y(), rat(1, 2)), (bf(&[1, 0, 2]), rat(1, 3))]);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"[{"form":"inf","coeff":"1/2"},{"form":["1","0","2"],"coeff":"1/3"}]"#);
        let back: QDivisor<Rat> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
