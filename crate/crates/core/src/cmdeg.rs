//! CM degrees of pencils of quasimaps, i.e. families over ℙ¹ whose total
//! space is ℙ¹ × ℙ¹ with fiber coordinates `(x, y)` and base coordinates
//! `(s, t)`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::binform::{gcd_all, rat_string, BinaryForm, MobiusMatrix, RationalPoint};
use crate::divisor::divisor_from;
use crate::error::{degenerate, Result};
use crate::field::{int, Rat, RatStr};
use crate::qmap::{make_quasimap, Quasimap, Stability};

/// `a·H + b·V` on ℙ¹ × ℙ¹, where `H` is the class of `{x/y = const}` (a
/// section of the projection to the base) and `V` that of a fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivClass {
    pub a: Rat,
    pub b: Rat,
}

impl DivClass {
    pub fn new(a: Rat, b: Rat) -> Self {
        DivClass { a, b }
    }

    /// Class of the zero locus of a form of bidegree `(p, q)`.
    pub fn of_bidegree(p: usize, q: usize) -> Self {
        DivClass::new(Rat::from_integer(p.into()), Rat::from_integer(q.into()))
    }

    pub fn dot(&self, o: &DivClass) -> Rat {
        &self.a * &o.b + &o.a * &self.b
    }

    pub fn add(&self, o: &DivClass) -> Self {
        DivClass::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        DivClass::new(&self.a * c, &self.b * c)
    }
}

/// Bihomogeneous form; entry `[i][j]` multiplies `xⁱ·y^{p−i}·sʲ·t^{q−j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiForm {
    coeffs: Vec<Vec<Rat>>,
}

impl BiForm {
    pub fn new(coeffs: Vec<Vec<Rat>>) -> Result<Self> {
        let width = coeffs.first().map(Vec::len).unwrap_or(0);
        if width == 0 || coeffs.iter().any(|r| r.len() != width) {
            return degenerate("coefficient matrix must be rectangular and nonempty");
        }
        Ok(BiForm { coeffs })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        BiForm::new(rows.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect())
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.coeffs.len() - 1, self.coeffs[0].len() - 1)
    }

    pub fn coeffs(&self) -> &[Vec<Rat>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(Zero::is_zero)
    }

    /// Restriction to the fiber over `[s0:t0]`.
    pub fn fiber(&self, p: &RationalPoint) -> BinaryForm<Rat> {
        BinaryForm::new(
            self.coeffs
                .iter()
                .map(|row| BinaryForm::new(row.clone()).eval(p.x(), p.y()))
                .collect(),
        )
    }

    /// The `(s, t)`-forms multiplying each power of `x`.
    fn rows(&self) -> Vec<BinaryForm<Rat>> {
        self.coeffs.iter().map(|r| BinaryForm::new(r.clone())).collect()
    }

    /// Fiberwise substitution `(x, y) ↦ M(x, y)`.
    pub fn transform(&self, m: &MobiusMatrix<Rat>) -> Self {
        let (p, q) = self.bidegree();
        let mut out = vec![vec![Rat::zero(); q + 1]; p + 1];
        for j in 0..=q {
            let col = BinaryForm::new(self.coeffs.iter().map(|r| r[j].clone()).collect());
            for (i, c) in m.substitute(&col).coeffs().iter().enumerate() {
                out[i][j] = c.clone();
            }
        }
        BiForm { coeffs: out }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilFamily {
    degree: usize,
    base_degree: usize,
    weight: Rat,
    sections: Vec<BiForm>,
    boundary: Vec<(BiForm, Rat)>,
}

pub fn make_pencil(
    m: usize,
    k: usize,
    u: Rat,
    sections: Vec<BiForm>,
    boundary: Vec<(BiForm, Rat)>,
) -> Result<PencilFamily> {
    if m == 0 || !u.is_positive() {
        return degenerate("fiber degree and weight must be positive");
    }
    if sections.is_empty() {
        return degenerate("no sections");
    }
    if let Some(f) = sections.iter().find(|f| f.bidegree() != (m, k)) {
        let (p, q) = f.bidegree();
        return degenerate(format!("section of bidegree ({p}, {q}), expected ({m}, {k})"));
    }
    if boundary.iter().any(|(b, c)| b.is_zero() || c.is_negative()) {
        return degenerate("boundary must be effective");
    }
    // A fiber on which every section vanishes is a common zero of all the
    // (s, t)-coefficient forms.
    let rows: Vec<BinaryForm<Rat>> = sections.iter().flat_map(BiForm::rows).collect();
    match gcd_all(&rows) {
        Err(_) => return degenerate("all sections vanish"),
        Ok(g) if g.degree() > 0 => {
            return degenerate(format!("all sections vanish on the fibers where {g} = 0"));
        }
        Ok(_) => {}
    }
    Ok(PencilFamily { degree: m, base_degree: k, weight: u, sections, boundary })
}

/// Outcome of a nefness probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Hypothesis met and the degree is nonnegative.
    Consistent,
    /// Hypothesis met but the degree is negative.
    Violated,
    /// Some sampled fiber fails the hypothesis; nothing is asserted.
    HypothesisNotMet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberSample {
    pub point: RationalPoint,
    pub class: Stability,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NefnessReport {
    /// Every sampled fiber is semistable and `0 < u < μ/2` on it.
    pub hypothesis: bool,
    #[serde(with = "rat_string")]
    pub degree: Rat,
    pub verdict: Verdict,
    pub fibers: Vec<FiberSample>,
}

impl PencilFamily {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_degree(&self) -> usize {
        self.base_degree
    }

    pub fn weight(&self) -> &Rat {
        &self.weight
    }

    pub fn sections(&self) -> &[BiForm] {
        &self.sections
    }

    pub fn boundary(&self) -> &[(BiForm, Rat)] {
        &self.boundary
    }

    /// `−(K + B + u·L)²` with `K = −2H`, `L = m·H + k·V`.
    pub fn cm_degree(&self) -> Rat {
        let mut cls = DivClass::new(int(-2), Rat::zero());
        for (b, c) in &self.boundary {
            let (p, q) = b.bidegree();
            cls = cls.add(&DivClass::of_bidegree(p, q).scale(c));
        }
        cls = cls.add(&DivClass::of_bidegree(self.degree, self.base_degree).scale(&self.weight));
        -cls.dot(&cls)
    }

    /// Degree of the boundary restricted to a fiber.
    fn fiber_boundary_degree(&self) -> Rat {
        self.boundary
            .iter()
            .map(|(b, c)| c * Rat::from_integer(b.bidegree().0.into()))
            .sum()
    }

    pub fn fiber_at(&self, p: &RationalPoint) -> Result<Quasimap<Rat>> {
        let mut pairs = Vec::new();
        for (b, c) in &self.boundary {
            let f = b.fiber(p);
            if f.is_zero() {
                return degenerate(format!("boundary component contains the fiber over {p}"));
            }
            if f.degree() > 0 {
                pairs.push((f, c.clone()));
            }
        }
        let r = self
            .boundary
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        make_quasimap(
            self.degree,
            self.weight.clone(),
            self.sections.iter().map(|f| f.fiber(p)).collect(),
            divisor_from(&pairs)?,
            r.try_into().map_err(|_| crate::Error::Unsupported("denominator too large".into()))?,
            None,
        )
    }

    pub fn nefness_probe(&self, samples: &[RationalPoint]) -> Result<NefnessReport> {
        let mu = self.fiber_boundary_degree() + &self.weight * Rat::from_integer(self.degree.into());
        let weight_ok = self.weight < &mu / int(2);
        let mut fibers = Vec::with_capacity(samples.len());
        for p in samples {
            let q = self.fiber_at(p)?;
            fibers.push(FiberSample { point: p.clone(), class: q.classify().class });
        }
        let hypothesis = weight_ok && fibers.iter().all(|f| f.class.is_semistable());
        let degree = self.cm_degree();
        let verdict = match (hypothesis, degree >= Rat::zero()) {
            (false, _) => Verdict::HypothesisNotMet,
            (true, true) => Verdict::Consistent,
            (true, false) => Verdict::Violated,
        };
        Ok(NefnessReport { hypothesis, degree, verdict, fibers })
    }

    /// Same coordinate change on every fiber.
    pub fn transform_fibers(&self, m: &MobiusMatrix<Rat>) -> Self {
        PencilFamily {
            sections: self.sections.iter().map(|f| f.transform(m)).collect(),
            boundary: self.boundary.iter().map(|(b, c)| (b.transform(m), c.clone())).collect(),
            ..self.clone()
        }
    }
}

/// Deterministic sample points `[0:1], [1:0], [1:1], [-1:1], [2:1], …`.
pub fn default_samples(n: usize) -> Vec<RationalPoint> {
    let mut out = vec![RationalPoint::affine(Rat::zero()), RationalPoint::infinity()];
    let mut k = 1i64;
    while out.len() < n {
        out.push(RationalPoint::affine(int(k)));
        out.push(RationalPoint::affine(int(-k)));
        out.push(RationalPoint::affine(Rat::new(1.into(), (k + 1).into())));
        k += 1;
    }
    out.truncate(n);
    out
}

fn matrix_of(f: &BiForm) -> Vec<Vec<RatStr>> {
    f.coeffs.iter().map(|r| r.iter().map(|a| RatStr(a.clone())).collect()).collect()
}

fn biform_of(rows: &[Vec<RatStr>]) -> Result<BiForm> {
    BiForm::new(rows.iter().map(|r| r.iter().map(|a| a.0.clone()).collect()).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryInput {
    pub form: Vec<Vec<RatStr>>,
    #[serde(with = "rat_string")]
    pub coeff: Rat,
}

/// JSON shape of a pencil: coefficient matrices indexed by (x-power, s-power).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilInput {
    pub degree: usize,
    pub base_degree: usize,
    #[serde(with = "rat_string")]
    pub weight: Rat,
    pub sections: Vec<Vec<Vec<RatStr>>>,
    #[serde(default)]
    pub boundary: Vec<BoundaryInput>,
}

impl PencilInput {
    pub fn build(self) -> Result<PencilFamily> {
        let sections = self.sections.iter().map(|m| biform_of(m)).collect::<Result<_>>()?;
        let boundary = self
            .boundary
            .iter()
            .map(|b| biform_of(&b.form).map(|f| (f, b.coeff.clone())))
            .collect::<Result<_>>()?;
        make_pencil(self.degree, self.base_degree, self.weight, sections, boundary)
    }
}

impl Serialize for PencilFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PencilInput {
            degree: self.degree,
            base_degree: self.base_degree,
            weight: self.weight.clone(),
            sections: self.sections.iter().map(matrix_of).collect(),
            boundary: self
                .boundary
                .iter()
                .map(|(b, c)| BoundaryInput { form: matrix_of(b), coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PencilFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PencilInput::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}
