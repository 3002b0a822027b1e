//! Semistable reduction of one-parameter families of quasimaps over ℚ[t]
//! localized at `t = 0`.
//!
//! The blow-up of a ruled surface at a point of the special fiber followed by
//! contraction of the strict transform of that fiber is an elementary
//! transformation. With the point moved to `(x, t) = (0, 0)`, a run of them
//! amounts to the substitution `x ↦ tᵃ·x` and division of each form by its
//! t-content. A fractional `a` is made integral by the base change `t = sᵉ`.
//! The exponent is read off the t-adic Newton data of the sections and the
//! boundary forms.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::binform::{rat_string, BinaryForm, MobiusMatrix, RationalPoint};
use crate::divisor::{divisor_from, max_multiplicity};
use crate::error::{degenerate, Error, Result};
use crate::field::{int, rat_to_string, Rat, RatFunc, RatStr};
use crate::poly::Poly;
use crate::qmap::{make_quasimap, move_to_origin, Quasimap, StabilityClass};

pub const DEFAULT_MAX_ITERS: usize = 1000;

/// A binary form with coefficients in ℚ[t]; entry `i` multiplies `xⁱ·y^{m−i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TForm {
    coeffs: Vec<Poly<Rat>>,
}

impl TForm {
    pub fn new(coeffs: Vec<Poly<Rat>>) -> Self {
        assert!(!coeffs.is_empty(), "a form has at least one coefficient");
        TForm { coeffs }
    }

    /// Constant in `t`.
    pub fn from_form(f: &BinaryForm<Rat>) -> Self {
        TForm::new(f.coeffs().iter().map(|c| Poly::constant(c.clone())).collect())
    }

    /// Matrix of integers indexed by (x-power, t-power).
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        TForm::new(rows.iter().map(|r| Poly::new(r.iter().map(|&c| int(c)).collect())).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly<Rat>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// t-order of each coefficient, `None` for zero coefficients.
    pub fn orders(&self) -> Vec<Option<usize>> {
        self.coeffs.iter().map(|c| c.valuation()).collect()
    }

    pub fn t_order(&self) -> Option<usize> {
        self.orders().into_iter().flatten().min()
    }

    fn t_degree(&self) -> usize {
        self.coeffs.iter().filter_map(|c| c.degree()).max().unwrap_or(0)
    }

    pub fn at(&self, t0: &Rat) -> BinaryForm<Rat> {
        BinaryForm::new(self.coeffs.iter().map(|c| c.eval(t0)).collect())
    }

    pub fn special(&self) -> BinaryForm<Rat> {
        self.at(&Rat::zero())
    }

    pub fn generic(&self) -> BinaryForm<RatFunc> {
        BinaryForm::new(self.coeffs.iter().map(|c| RatFunc::from_poly(c.clone())).collect())
    }

    fn map_coeffs(&self, f: impl Fn(usize, &Poly<Rat>) -> Poly<Rat>) -> Self {
        TForm::new(self.coeffs.iter().enumerate().map(|(i, c)| f(i, c)).collect())
    }

    fn div_t(&self, k: usize) -> Self {
        self.map_coeffs(|_, c| Poly::new(c.coeffs().iter().skip(k).cloned().collect()))
    }

    /// `t ↦ tᵉ`.
    fn base_change(&self, e: usize) -> Self {
        self.map_coeffs(|_, c| {
            let mut v = vec![Rat::zero(); c.degree().map_or(0, |d| d * e + 1)];
            for (j, a) in c.coeffs().iter().enumerate() {
                v[j * e] = a.clone();
            }
            Poly::new(v)
        })
    }

    /// `x ↦ tᵃ·x`.
    fn shift(&self, a: usize) -> Self {
        self.map_coeffs(|i, c| c.mul(&Poly::monomial(Rat::one(), a * i)))
    }

    /// Substitution by a matrix with constant entries, one t-power at a time.
    fn substitute(&self, m: &MobiusMatrix<Rat>) -> Self {
        let n = self.degree();
        let mut out = vec![vec![Rat::zero(); self.t_degree() + 1]; n + 1];
        for j in 0..=self.t_degree() {
            let col = BinaryForm::new(self.coeffs.iter().map(|c| c.coeff(j)).collect());
            for (i, c) in m.substitute(&col).coeffs().iter().enumerate() {
                out[i][j] = c.clone();
            }
        }
        TForm::new(out.into_iter().map(Poly::new).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvrFamily {
    degree: usize,
    weight: Rat,
    sections: Vec<TForm>,
    boundary: Vec<(TForm, Rat)>,
    r: u32,
}

/// Builds a family, dividing the sections by their common t-content.
/// Boundary forms must already be flat over the base.
pub fn make_family(
    m: usize,
    u: Rat,
    sections: Vec<TForm>,
    boundary: Vec<(TForm, Rat)>,
    r: u32,
) -> Result<DvrFamily> {
    if let Some(f) = sections.iter().chain(boundary.iter().map(|(b, _)| b)).find(|f| f.is_zero()) {
        return degenerate(format!("identically zero form of degree {}", f.degree()));
    }
    if let Some(f) = sections.iter().find(|f| f.degree() != m) {
        return degenerate(format!("section of degree {} in a degree {m} family", f.degree()));
    }
    if boundary.iter().any(|(b, _)| b.t_order() != Some(0)) {
        return degenerate("boundary form divisible by t");
    }
    let content = sections.iter().filter_map(|f| f.t_order()).min();
    let Some(content) = content else {
        return degenerate("all sections vanish");
    };
    let fam = DvrFamily {
        degree: m,
        weight: u,
        sections: sections.iter().map(|f| f.div_t(content)).collect(),
        boundary,
        r,
    };
    fam.special_fiber()?;
    fam.generic_fiber()?;
    Ok(fam)
}

impl DvrFamily {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weight(&self) -> &Rat {
        &self.weight
    }

    pub fn sections(&self) -> &[TForm] {
        &self.sections
    }

    pub fn boundary(&self) -> &[(TForm, Rat)] {
        &self.boundary
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Fiber over `t = t0`.
    pub fn fiber_at(&self, t0: &Rat) -> Result<Quasimap<Rat>> {
        let pairs: Vec<(BinaryForm<Rat>, Rat)> =
            self.boundary.iter().map(|(b, c)| (b.at(t0), c.clone())).collect();
        if pairs.iter().any(|(b, _)| b.is_zero()) {
            return degenerate(format!("boundary form vanishes on the fiber t = {}", rat_to_string(t0)));
        }
        make_quasimap(
            self.degree,
            self.weight.clone(),
            self.sections.iter().map(|f| f.at(t0)).collect(),
            divisor_from(&pairs)?,
            self.r,
            None,
        )
    }

    pub fn special_fiber(&self) -> Result<Quasimap<Rat>> {
        self.fiber_at(&Rat::zero())
    }

    /// The fiber over the generic point, over ℚ(t).
    pub fn generic_fiber(&self) -> Result<Quasimap<RatFunc>> {
        let pairs: Vec<(BinaryForm<RatFunc>, Rat)> =
            self.boundary.iter().map(|(b, c)| (b.generic(), c.clone())).collect();
        make_quasimap(
            self.degree,
            self.weight.clone(),
            self.sections.iter().map(TForm::generic).collect(),
            divisor_from(&pairs)?,
            self.r,
            None,
        )
    }

    pub fn generic_classify(&self) -> Result<StabilityClass<RatFunc>> {
        Ok(self.generic_fiber()?.classify())
    }

    fn mu(&self) -> Rat {
        let b: Rat = self
            .boundary
            .iter()
            .map(|(f, c)| c * Rat::from_integer(f.degree().into()))
            .sum();
        b + &self.weight * Rat::from_integer(self.degree.into())
    }

    fn map_forms(&self, f: impl Fn(&TForm) -> TForm) -> Self {
        DvrFamily {
            degree: self.degree,
            weight: self.weight.clone(),
            sections: self.sections.iter().map(&f).collect(),
            boundary: self.boundary.iter().map(|(b, c)| (f(b), c.clone())).collect(),
            r: self.r,
        }
    }

    /// Divides sections jointly and each boundary form separately by their
    /// t-content.
    fn renormalize(&self) -> Self {
        let content = self.sections.iter().filter_map(|f| f.t_order()).min().unwrap_or(0);
        DvrFamily {
            sections: self.sections.iter().map(|f| f.div_t(content)).collect(),
            boundary: self
                .boundary
                .iter()
                .map(|(b, c)| (b.div_t(b.t_order().unwrap_or(0)), c.clone()))
                .collect(),
            ..self.clone()
        }
    }

    pub fn semistable_reduction(&self) -> Result<ReductionReport> {
        self.semistable_reduction_with_cap(DEFAULT_MAX_ITERS)
    }

    pub fn semistable_reduction_with_cap(&self, cap: usize) -> Result<ReductionReport> {
        let generic = self.generic_classify()?;
        if !generic.class.is_semistable() {
            return Err(Error::PreconditionViolated(format!(
                "generic fiber is {}, not semistable",
                generic.class
            )));
        }
        let half = self.mu() / int(2);
        let mut cur = self.clone();
        let mut e = 1usize;
        // (center, shift in the parameter current at that step, e at that step)
        let mut raw: Vec<(RationalPoint, usize, usize)> = Vec::new();
        loop {
            let special = cur.special_fiber()?;
            let d = special.twisted_boundary();
            let (max, _) = max_multiplicity(&d);
            if max <= half {
                debug_assert!(special.classify().class.is_semistable());
                break;
            }
            if raw.len() >= cap {
                return Err(Error::NonTermination(cap));
            }
            let bad: Vec<_> = d.terms().iter().filter(|(_, c)| *c > half).collect();
            let center = match bad.as_slice() {
                [(cl, _)] => cl.rational_point(),
                _ => None,
            };
            let Some(center) = center else {
                return Err(Error::PreconditionViolated(format!(
                    "expected a unique rational point of multiplicity above {}",
                    rat_to_string(&half)
                )));
            };
            cur = cur.map_forms(|f| f.substitute(&move_to_origin(&center)));
            let a = cur.optimal_shift(&half)?;
            let step_e: usize = a.denom().try_into().expect("small denominator");
            if step_e > 1 {
                cur = cur.map_forms(|f| f.base_change(step_e));
                e *= step_e;
            }
            let shift: usize = (a * Rat::from_integer(step_e.into())).to_integer().try_into().unwrap();
            cur = cur.map_forms(|f| f.shift(shift)).renormalize();
            raw.push((center, shift, e));
        }
        let steps = raw
            .into_iter()
            .map(|(center, shift, e_then)| {
                let shift = shift * (e / e_then);
                let m = move_to_origin(&center);
                let [[a, b], [c, d]] = m.entries().clone();
                let matrix = [
                    [SMonomial { coeff: a, power: shift }, SMonomial { coeff: b, power: 0 }],
                    [SMonomial { coeff: c, power: shift }, SMonomial { coeff: d, power: 0 }],
                ];
                Step { center, shift, matrix }
            })
            .collect::<Vec<_>>();
        Ok(ReductionReport { base_change_exponent: e, iterations: steps.len(), steps, result: cur })
    }

    /// Smallest Newton breakpoint at which the multiplicity of `B + u·B'` at
    /// `[0:1]` on the sheared special fiber is at most `half`.
    fn optimal_shift(&self, half: &Rat) -> Result<Rat> {
        let mut sec = vec![None; self.degree + 1];
        for f in &self.sections {
            for (s, o) in sec.iter_mut().zip(f.orders()) {
                *s = match (*s, o) {
                    (Some(a), Some(b)) => Some(usize::min(a, b)),
                    (a, b) => a.or(b),
                };
            }
        }
        let mut data: Vec<(Vec<Option<usize>>, Rat)> = vec![(sec, self.weight.clone())];
        data.extend(self.boundary.iter().map(|(b, c)| (b.orders(), c.clone())));
        let mult = |a: &Rat| -> Rat {
            data.iter()
                .map(|(o, c)| c * Rat::from_integer(leftmost_min(o, a).into()))
                .sum()
        };
        let mut candidates: Vec<Rat> = Vec::new();
        for (o, _) in &data {
            for (i, vi) in o.iter().enumerate() {
                for (k, vk) in o.iter().enumerate().skip(i + 1) {
                    if let (Some(vi), Some(vk)) = (vi, vk) {
                        if vi > vk {
                            candidates.push(Rat::new((vi - vk).into(), (k - i).into()));
                        }
                    }
                }
            }
        }
        candidates.sort();
        candidates.dedup();
        candidates.into_iter().find(|a| mult(a) <= *half).ok_or_else(|| {
            Error::PreconditionViolated("no shift resolves the bad point; generic fiber unstable".into())
        })
    }
}

/// Smallest index minimizing `v_j + a·j`.
fn leftmost_min(orders: &[Option<usize>], a: &Rat) -> usize {
    let mut best: Option<(Rat, usize)> = None;
    for (j, v) in orders.iter().enumerate() {
        let Some(v) = v else { continue };
        let w = Rat::from_integer((*v).into()) + a * Rat::from_integer(j.into());
        if best.as_ref().map_or(true, |(b, _)| w.cmp(b) == Ordering::Less) {
            best = Some((w, j));
        }
    }
    best.map_or(0, |(_, j)| j)
}

/// `coeff·s^power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SMonomial {
    #[serde(with = "rat_string")]
    pub coeff: Rat,
    pub power: usize,
}

impl SMonomial {
    pub fn eval(&self, s0: &Rat) -> Rat {
        &self.coeff * num_traits::pow(s0.clone(), self.power)
    }
}

/// One elementary transformation: sections of the new family are those of
/// the old one substituted by `matrix`, then divided by their t-content.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub center: RationalPoint,
    pub shift: usize,
    pub matrix: [[SMonomial; 2]; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReductionReport {
    pub base_change_exponent: usize,
    pub steps: Vec<Step>,
    pub result: DvrFamily,
    pub iterations: usize,
}

impl ReductionReport {
    /// Composite substitution at `s = s0`; it carries the input fiber at
    /// `t = s0ᵉ` to a scalar multiple of the result fiber at `s0`.
    pub fn total_matrix_at(&self, s0: &Rat) -> Result<MobiusMatrix<Rat>> {
        let mut acc = MobiusMatrix::identity();
        for st in &self.steps {
            let [[a, b], [c, d]] = &st.matrix;
            let m = MobiusMatrix::new(a.eval(s0), b.eval(s0), c.eval(s0), d.eval(s0))?;
            acc = acc.compose(&m);
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryInput {
    pub form: Vec<Vec<RatStr>>,
    #[serde(with = "rat_string")]
    pub coeff: Rat,
}

/// JSON shape of a family: coefficient matrices indexed by (x-power, t-power).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyInput {
    pub degree: usize,
    #[serde(with = "rat_string")]
    pub weight: Rat,
    pub sections: Vec<Vec<Vec<RatStr>>>,
    #[serde(default)]
    pub boundary: Vec<BoundaryInput>,
    #[serde(default = "one")]
    pub r: u32,
}

fn one() -> u32 {
    1
}

fn matrix_of(f: &TForm) -> Vec<Vec<RatStr>> {
    f.coeffs.iter().map(|c| c.coeffs().iter().map(|a| RatStr(a.clone())).collect()).collect()
}

fn tform_of(rows: &[Vec<RatStr>]) -> Result<TForm> {
    if rows.is_empty() {
        return degenerate("empty coefficient matrix");
    }
    Ok(TForm::new(
        rows.iter().map(|row| Poly::new(row.iter().map(|a| a.0.clone()).collect())).collect(),
    ))
}

impl FamilyInput {
    pub fn build(self) -> Result<DvrFamily> {
        let sections = self.sections.iter().map(|m| tform_of(m)).collect::<Result<_>>()?;
        let boundary = self
            .boundary
            .iter()
            .map(|b| tform_of(&b.form).map(|f| (f, b.coeff.clone())))
            .collect::<Result<_>>()?;
        make_family(self.degree, self.weight, sections, boundary, self.r)
    }
}

impl Serialize for DvrFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyInput {
            degree: self.degree,
            weight: self.weight.clone(),
            sections: self.sections.iter().map(matrix_of).collect(),
            boundary: self
                .boundary
                .iter()
                .map(|(b, c)| BoundaryInput { form: matrix_of(b), coeff: c.clone() })
                .collect(),
            r: self.r,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DvrFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FamilyInput::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}
