//! Quasimaps from ℙ¹ and their K-stability.
//!
//! A quasimap of degree `m` is a tuple of degree-`m` binary forms, not all
//! zero, considered up to a common scalar. Together with a boundary divisor
//! `B` and a weight `u` it defines the log-twisted pair `(ℙ¹, B + u·B', u·M)`
//! where `B'` is the divisor of the gcd of the sections (the fixed part) and
//! `M` the residual movable system. K-stability is decided by comparing the
//! largest multiplicity of `B + u·B'` with `μ/2`, `μ = deg B + u·m`; this test
//! is insensitive to Veronese rescaling and so holds for every weight.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::binform::{
    evaluate_ideal, gcd_all, lth_root, rat_string, BinaryForm, MobiusMatrix, Monomial, MultiPoly,
    RationalPoint,
};
use crate::divisor::{combine, divisor_from, max_multiplicity, multiplicity_at, Cluster, QDivisor};
use crate::error::{degenerate, Error, Result};
use crate::field::{int, rat_to_string, Field, Rat};

/// Homogeneous ideal of the affine cone over the target `X ⊂ ℙᴺ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeTarget {
    pub ambient_dim: usize,
    pub generators: Vec<MultiPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quasimap<F = Rat> {
    degree: usize,
    weight: Rat,
    sections: Vec<BinaryForm<F>>,
    boundary: QDivisor<F>,
    r: u32,
    target: Option<ConeTarget>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stability {
    NotFano,
    Unstable,
    Semistable,
    Polystable,
    Stable,
}

impl Stability {
    pub fn is_semistable(self) -> bool {
        matches!(self, Stability::Semistable | Stability::Polystable | Stability::Stable)
    }

    pub fn is_polystable(self) -> bool {
        matches!(self, Stability::Polystable | Stability::Stable)
    }

    pub fn is_stable(self) -> bool {
        self == Stability::Stable
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The critical cluster and its multiplicity in `B + u·B'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<F> {
    pub cluster: Cluster<F>,
    pub multiplicity: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityClass<F = Rat> {
    pub class: Stability,
    pub witness: Option<Witness<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericInvariants {
    pub mu: Rat,
    pub v: Rat,
    pub fixed_degree: usize,
    pub movable_degree: usize,
}

pub fn make_quasimap<F: Field>(
    m: usize,
    u: Rat,
    sections: Vec<BinaryForm<F>>,
    boundary: QDivisor<F>,
    r: u32,
    target: Option<ConeTarget>,
) -> Result<Quasimap<F>> {
    if m == 0 {
        return degenerate("quasimap degree must be positive");
    }
    if !u.is_positive() {
        return degenerate("weight must be positive");
    }
    if sections.is_empty() {
        return degenerate("no sections");
    }
    if let Some(f) = sections.iter().find(|f| f.degree() != m) {
        return degenerate(format!("section of degree {} in a degree {m} quasimap", f.degree()));
    }
    if sections.iter().all(|f| f.is_zero()) {
        return degenerate("all sections vanish");
    }
    if !boundary.is_effective() {
        return degenerate("boundary is not effective");
    }
    if r == 0 {
        return degenerate("denominator bound r must be positive");
    }
    let rr = Rat::from_integer(r.into());
    if boundary.terms().iter().any(|(_, a)| !(a * &rr).is_integer()) {
        return degenerate(format!("{r}·B is not integral"));
    }
    if let Some(t) = &target {
        if t.ambient_dim + 1 != sections.len() {
            return degenerate(format!(
                "target in ℙ^{} but {} sections",
                t.ambient_dim,
                sections.len()
            ));
        }
        if !evaluate_ideal(&t.generators, &sections)? {
            return Err(Error::TargetViolation(
                "a cone generator does not vanish on the sections".into(),
            ));
        }
    }
    Ok(Quasimap { degree: m, weight: u, sections, boundary, r, target })
}

impl<F: Field> Quasimap<F> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weight(&self) -> &Rat {
        &self.weight
    }

    pub fn sections(&self) -> &[BinaryForm<F>] {
        &self.sections
    }

    pub fn boundary(&self) -> &QDivisor<F> {
        &self.boundary
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn target(&self) -> Option<&ConeTarget> {
        self.target.as_ref()
    }

    /// Normalized gcd of the sections.
    pub fn fixed_form(&self) -> BinaryForm<F> {
        gcd_all(&self.sections).expect("validated quasimap has a nonzero section")
    }

    /// Fixed part `B'` and the degree of the movable part.
    pub fn fixed_movable(&self) -> (QDivisor<F>, usize) {
        let g = self.fixed_form();
        let fixed = divisor_from(&[(g.clone(), Rat::one())]).expect("nonzero gcd");
        (fixed, self.degree - g.degree())
    }

    /// Constant iff all sections are proportional; the value is the common
    /// point of ℙᴺ scaled so its first nonzero coordinate is one.
    pub fn is_constant(&self) -> (bool, Option<Vec<F>>) {
        let (k, fk) = self
            .sections
            .iter()
            .enumerate()
            .find(|(_, f)| !f.is_zero())
            .expect("validated quasimap has a nonzero section");
        let j = fk.x_power().unwrap();
        let pivot = fk.coeff(j).clone();
        let mut value = Vec::with_capacity(self.sections.len());
        for f in &self.sections {
            let c = f.coeff(j).clone() / pivot.clone();
            if *f != fk.scale(&c) {
                return (false, None);
            }
            value.push(c);
        }
        debug_assert!(value[k].is_one());
        (true, Some(value))
    }

    pub fn invariants(&self) -> NumericInvariants {
        let (fixed, movable) = self.fixed_movable();
        let mu = self.boundary.degree() + &self.weight * Rat::from_integer(self.degree.into());
        NumericInvariants {
            v: int(2) - &mu,
            mu,
            fixed_degree: fixed.degree().to_integer().try_into().unwrap(),
            movable_degree: movable,
        }
    }

    /// `B + u·B'`.
    pub fn twisted_boundary(&self) -> QDivisor<F> {
        let (fixed, _) = self.fixed_movable();
        combine(&self.boundary, &fixed, &Rat::one(), &self.weight)
    }

    fn fano_failure(&self, inv: &NumericInvariants, max_mult: &Rat) -> bool {
        inv.mu >= int(2) || max_mult >= &Rat::one()
    }

    /// δ(q) evaluated literally: zero off the log Fano locus, otherwise the
    /// minimum of `2(1 − mult)/v` over points, with generic points of the
    /// movable system contributing multiplicity `u`.
    pub fn delta(&self) -> Rat {
        let inv = self.invariants();
        let d = self.twisted_boundary();
        let (max_mult, _) = max_multiplicity(&d);
        if self.fano_failure(&inv, &max_mult) {
            return Rat::zero();
        }
        if inv.movable_degree > 0 && self.weight >= Rat::one() {
            return Rat::zero();
        }
        let two = int(2);
        // Points off every support.
        let mut best = &two / &inv.v;
        if inv.movable_degree > 0 {
            best = best.min(&two * (Rat::one() - &self.weight) / &inv.v);
        }
        best.min(&two * (Rat::one() - max_mult) / &inv.v)
    }

    pub fn classify(&self) -> StabilityClass<F> {
        let inv = self.invariants();
        let d = self.twisted_boundary();
        let (max_mult, cluster) = max_multiplicity(&d);
        let witness = cluster.map(|cluster| Witness { cluster, multiplicity: max_mult.clone() });
        if self.fano_failure(&inv, &max_mult) {
            return StabilityClass { class: Stability::NotFano, witness };
        }
        let half = &inv.mu / int(2);
        let class = if max_mult > half {
            Stability::Unstable
        } else if max_mult < half {
            return StabilityClass { class: Stability::Stable, witness: None };
        } else if inv.movable_degree == 0 && d.mass_with_coefficient(&half) == 2 && d.degree() == inv.mu
        {
            // Constant, and B + u·B' is μ/2 times two distinct geometric points.
            Stability::Polystable
        } else {
            Stability::Semistable
        };
        StabilityClass { class, witness }
    }

    /// Pulls back along `(x, y) ↦ M(x, y)`; section scalars are preserved.
    pub fn transform(&self, m: &MobiusMatrix<F>) -> Self {
        Quasimap {
            degree: self.degree,
            weight: self.weight.clone(),
            sections: self.sections.iter().map(|f| m.substitute(f)).collect(),
            boundary: self.boundary.transform(m),
            r: self.r,
            target: self.target.clone(),
        }
    }

    pub fn map_field<G: Field>(&self, h: impl Fn(&F) -> G + Copy) -> Result<Quasimap<G>> {
        make_quasimap(
            self.degree,
            self.weight.clone(),
            self.sections.iter().map(|f| f.map(h)).collect(),
            self.boundary.map(h),
            self.r,
            self.target.clone(),
        )
    }
}

impl Quasimap<Rat> {
    /// `β(p) = μ/2 − mult_p(B + u·B')`.
    pub fn beta_at(&self, p: &RationalPoint) -> Result<Rat> {
        let inv = self.invariants();
        let d = self.twisted_boundary();
        let (max_mult, _) = max_multiplicity(&d);
        if self.fano_failure(&inv, &max_mult) {
            return Err(Error::NotFano(format!(
                "μ = {}, max multiplicity {}",
                rat_to_string(&inv.mu),
                rat_to_string(&max_mult)
            )));
        }
        Ok(inv.mu / int(2) - multiplicity_at(&d, p))
    }

    /// Rational points of `B + u·B'` with their multiplicities.
    pub fn critical_support(&self) -> Vec<(RationalPoint, Rat)> {
        self.twisted_boundary().rational_support()
    }
}

/// All exponent vectors of total degree `l` in `n` variables, in descending
/// lexicographic order.
pub fn veronese_exponents(n: usize, l: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, l: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(l);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=l).rev() {
            prefix.push(e);
            rec(n, l - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, l, &mut Vec::new(), &mut out);
    }
    out
}

fn monomial_of<F: Field>(sections: &[BinaryForm<F>], exps: &[u32]) -> BinaryForm<F> {
    let m = sections[0].degree();
    let mut acc = BinaryForm::new(vec![F::one()]);
    for (f, &e) in sections.iter().zip(exps) {
        if e > 0 {
            acc = acc.mul(&f.pow(e));
        }
    }
    debug_assert_eq!(acc.degree(), m * exps.iter().sum::<u32>() as usize);
    acc
}

/// The `l`-th Veronese rescaling: degree `l·m`, weight `u/l`, sections all
/// degree-`l` monomials in the original sections.
pub fn rescale<F: Field>(q: &Quasimap<F>, l: u32) -> Result<Quasimap<F>> {
    if l == 0 {
        return degenerate("rescaling factor must be positive");
    }
    let exps = veronese_exponents(q.sections.len(), l);
    let sections = exps.iter().map(|e| monomial_of(&q.sections, e)).collect();
    let target = q.target.as_ref().map(|t| veronese_target(t, l));
    make_quasimap(
        q.degree * l as usize,
        &q.weight / Rat::from_integer(l.into()),
        sections,
        q.boundary.clone(),
        q.r,
        target,
    )
}

fn collect_terms(terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> MultiPoly {
    let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
    for (e, c) in terms {
        *acc.entry(e).or_insert_with(Rat::zero) += c;
    }
    MultiPoly {
        terms: acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Monomial { coeff, exps })
            .collect(),
    }
}

/// Ideal of `v_l(X)`: the quadratic Veronese relations plus every generator
/// multiplied up to a degree divisible by `l`, rewritten in the new variables.
fn veronese_target(t: &ConeTarget, l: u32) -> ConeTarget {
    let n = t.ambient_dim + 1;
    let mons = veronese_exponents(n, l);
    let index: BTreeMap<&Vec<u32>, usize> = mons.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let unit = |i: usize| {
        let mut v = vec![0u32; mons.len()];
        v[i] += 1;
        v
    };
    let mut gens = Vec::new();
    let mut by_sum: BTreeMap<Vec<u32>, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..mons.len() {
        for j in i..mons.len() {
            let s: Vec<u32> = mons[i].iter().zip(&mons[j]).map(|(a, b)| a + b).collect();
            by_sum.entry(s).or_default().push((i, j));
        }
    }
    for pairs in by_sum.values() {
        let (i0, j0) = pairs[0];
        for &(i, j) in &pairs[1..] {
            let mut a = unit(i0);
            a[j0] += 1;
            let mut b = unit(i);
            b[j] += 1;
            gens.push(collect_terms([(a, Rat::one()), (b, -Rat::one())]));
        }
    }
    for g in &t.generators {
        let d = g.total_degree().unwrap_or(0);
        let c = d.div_ceil(l).max(1);
        let pad = c * l - d;
        for h in veronese_exponents(n, pad) {
            let lifted = g.terms.iter().map(|term| {
                let mut e: Vec<u32> = term.exps.iter().zip(&h).map(|(a, b)| a + b).collect();
                let mut z = vec![0u32; mons.len()];
                for _ in 0..c {
                    // Peel off a degree-l monomial, lowest variables first.
                    let mut chunk = vec![0u32; n];
                    let mut need = l;
                    for k in 0..n {
                        let take = e[k].min(need);
                        chunk[k] = take;
                        e[k] -= take;
                        need -= take;
                    }
                    z[index[&chunk]] += 1;
                }
                (z, term.coeff.clone())
            });
            let p = collect_terms(lifted);
            if !p.terms.is_empty() {
                gens.push(p);
            }
        }
    }
    ConeTarget { ambient_dim: mons.len() - 1, generators: gens }
}

/// Common scalar `c` with `a[i] = c·b[i]` for all `i`, when it exists.
pub(crate) fn common_scalar<F: Field>(a: &[BinaryForm<F>], b: &[BinaryForm<F>]) -> Option<F> {
    if a.len() != b.len() {
        return None;
    }
    let (k, bk) = b.iter().enumerate().find(|(_, f)| !f.is_zero())?;
    if bk.degree() != a[k].degree() {
        return None;
    }
    let j = bk.x_power().unwrap();
    let c = a[k].coeff(j).clone() / bk.coeff(j).clone();
    if c.is_zero() {
        return None;
    }
    a.iter().zip(b).all(|(x, y)| *x == y.scale(&c)).then_some(c)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Inverts [`rescale`]: recovers `q` with `rescale(q, l) ≅ q'`, if any.
pub fn unrescale(qp: &Quasimap<Rat>, l: u32) -> Result<Option<Quasimap<Rat>>> {
    if l == 0 {
        return degenerate("rescaling factor must be positive");
    }
    if qp.degree % l as usize != 0 {
        return degenerate(format!("degree {} not divisible by {l}", qp.degree));
    }
    let count = qp.sections.len();
    let l_us = l as usize;
    let n = (1..=count)
        .take_while(|&n| binomial(n - 1 + l_us, l_us) <= count)
        .find(|&n| binomial(n - 1 + l_us, l_us) == count);
    let Some(n) = n else {
        return degenerate(format!("{count} sections is not a Veronese dimension for l = {l}"));
    };
    let mons = veronese_exponents(n, l);
    let index: BTreeMap<&Vec<u32>, usize> = mons.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let pure = |i: usize| {
        let mut e = vec![0u32; n];
        e[i] = l;
        e
    };
    let Some(i0) = (0..n).find(|&i| !qp.sections[index[&pure(i)]].is_zero()) else {
        return Ok(None);
    };
    let Some(g) = lth_root(&qp.sections[index[&pure(i0)]], l)? else {
        return Ok(None);
    };
    let g_pow = g.pow(l - 1);
    let mut sections = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i0] = l - 1;
        e[i] += 1;
        match qp.sections[index[&e]].exact_div(&g_pow) {
            Some(f) => sections.push(f),
            None => return Ok(None),
        }
    }
    let candidate: Vec<BinaryForm<Rat>> = mons.iter().map(|e| monomial_of(&sections, e)).collect();
    if common_scalar(&candidate, &qp.sections).is_none() {
        return Ok(None);
    }
    let target = qp.target.as_ref().map(|t| pullback_target(t, &mons, n));
    make_quasimap(
        qp.degree / l_us,
        &qp.weight * Rat::from_integer(l.into()),
        sections,
        qp.boundary.clone(),
        qp.r,
        target,
    )
    .map(Some)
}

/// Substitutes `z_α = x^α` into each generator; identically vanishing
/// results (the Veronese relations) are dropped.
fn pullback_target(t: &ConeTarget, mons: &[Vec<u32>], n: usize) -> ConeTarget {
    let generators = t
        .generators
        .iter()
        .map(|g| {
            collect_terms(g.terms.iter().map(|term| {
                let mut e = vec![0u32; n];
                for (zi, &k) in term.exps.iter().enumerate() {
                    for (a, b) in e.iter_mut().zip(&mons[zi]) {
                        *a += k * b;
                    }
                }
                (e, term.coeff.clone())
            }))
        })
        .filter(|p| !p.terms.is_empty())
        .collect();
    ConeTarget { ambient_dim: n - 1, generators }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerationReport {
    pub center: RationalPoint,
    /// Central fiber, written in coordinates where the center is `[0:1]` and
    /// the opposite fixed point of the ℂ*-action is `[1:0]`.
    pub central_fiber: Quasimap<Rat>,
    pub beta: Rat,
    pub is_product_type: bool,
}

/// Matrix whose substitution moves `p` to `[0:1]`.
pub fn move_to_origin(p: &RationalPoint) -> MobiusMatrix<Rat> {
    if p.is_infinity() {
        MobiusMatrix::swap()
    } else {
        MobiusMatrix::translation(p.x().clone())
    }
}

/// The special test configuration that fixes `p` and pushes every other
/// point to the opposite fixed point; its central fiber is the constant
/// quasimap at the value of the movable map at `p`.
pub fn degenerate_at(q: &Quasimap<Rat>, p: &RationalPoint) -> Result<DegenerationReport> {
    let beta = q.beta_at(p)?;
    let moved = q.transform(&move_to_origin(p));
    let m = q.degree;
    let order = moved
        .sections
        .iter()
        .filter_map(|f| f.x_power())
        .min()
        .expect("nonzero section");
    let sections = moved
        .sections
        .iter()
        .map(|f| BinaryForm::monomial(f.coeff(order).clone(), order, m))
        .collect();
    let origin = RationalPoint::affine(Rat::zero());
    let at_origin = multiplicity_at(&moved.boundary, &origin);
    let rest = moved.boundary.degree() - &at_origin;
    let mut pairs = Vec::new();
    if !at_origin.is_zero() {
        pairs.push((BinaryForm::x(), at_origin));
    }
    if !rest.is_zero() {
        pairs.push((BinaryForm::y(), rest));
    }
    let central = make_quasimap(
        m,
        q.weight.clone(),
        sections,
        divisor_from(&pairs)?,
        q.r,
        q.target.clone(),
    )?;
    let is_product_type = are_isomorphic(&central, q)?;
    Ok(DegenerationReport { center: p.clone(), central_fiber: central, beta, is_product_type })
}

/// Profile of a divisor: total degree carried by each coefficient.
fn profile(d: &QDivisor<Rat>) -> BTreeMap<Rat, usize> {
    let mut v = BTreeMap::new();
    for (c, a) in d.terms() {
        *v.entry(a.clone()).or_insert(0) += c.degree();
    }
    v
}

fn verify_isomorphism(q1: &Quasimap<Rat>, q2: &Quasimap<Rat>, phi: &MobiusMatrix<Rat>) -> bool {
    let moved: Vec<BinaryForm<Rat>> = q1.sections.iter().map(|f| phi.substitute(f)).collect();
    common_scalar(&moved, &q2.sections).is_some() && q1.boundary.transform(phi) == q2.boundary
}

/// A labelled family of divisors attached to a quasimap; an isomorphism must
/// match them label by label.
struct Marking {
    divisors: Vec<QDivisor<Rat>>,
}

impl Marking {
    fn signature(&self, p: &RationalPoint) -> Vec<Rat> {
        self.divisors.iter().map(|d| multiplicity_at(d, p)).collect()
    }

    fn points(&self) -> Vec<(RationalPoint, Vec<Rat>)> {
        let mut pts: Vec<RationalPoint> = self
            .divisors
            .iter()
            .flat_map(|d| d.rational_support().into_iter().map(|(p, _)| p))
            .collect();
        pts.sort();
        pts.dedup();
        pts.into_iter().map(|p| {
            let s = self.signature(&p);
            (p, s)
        }).collect()
    }
}

/// Decides whether some Möbius transformation defined over ℚ carries `q2`
/// onto `q1` (boundaries with coefficients, sections up to one global scalar).
pub fn are_isomorphic(q1: &Quasimap<Rat>, q2: &Quasimap<Rat>) -> Result<bool> {
    if q1.degree != q2.degree
        || q1.weight != q2.weight
        || q1.sections.len() != q2.sections.len()
        || q1.sections.iter().zip(&q2.sections).any(|(a, b)| a.is_zero() != b.is_zero())
        || profile(&q1.boundary) != profile(&q2.boundary)
    {
        return Ok(false);
    }
    let (fix1, mov1) = q1.fixed_movable();
    let (fix2, mov2) = q2.fixed_movable();
    if mov1 != mov2 || profile(&fix1) != profile(&fix2) {
        return Ok(false);
    }
    if mov1 == 0 {
        let (_, v1) = q1.is_constant();
        let (_, v2) = q2.is_constant();
        if v1 != v2 {
            return Ok(false);
        }
        return constant_isomorphic(q1, q2, &fix1, &fix2);
    }
    moving_isomorphic(q1, q2, &fix1, &fix2)
}

fn movable_sections(q: &Quasimap<Rat>) -> Vec<BinaryForm<Rat>> {
    let g = q.fixed_form();
    q.sections
        .iter()
        .map(|f| f.exact_div(&g).expect("gcd divides every section"))
        .collect()
}

fn match_triples(
    q1: &Quasimap<Rat>,
    q2: &Quasimap<Rat>,
    anchors: &[(RationalPoint, Vec<Rat>)],
    targets: &[(RationalPoint, Vec<Rat>)],
) -> Result<bool> {
    let cands: Vec<Vec<&RationalPoint>> = anchors
        .iter()
        .map(|(_, s)| targets.iter().filter(|(_, t)| t == s).map(|(p, _)| p).collect())
        .collect();
    for a in &cands[0] {
        for b in &cands[1] {
            if a == b {
                continue;
            }
            for c in &cands[2] {
                if c == a || c == b {
                    continue;
                }
                let phi = MobiusMatrix::from_three_points(
                    [&anchors[0].0, &anchors[1].0, &anchors[2].0],
                    [a, b, c],
                )?;
                if verify_isomorphism(q1, q2, &phi) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Non-constant case. Three probe points of `q2` are marked by the fiber of
/// the movable map through them; the corresponding fibers of `q1` are cut
/// out by the same linear combination, so any isomorphism sends each probe
/// to one of their rational points.
fn moving_isomorphic(
    q1: &Quasimap<Rat>,
    q2: &Quasimap<Rat>,
    fix1: &QDivisor<Rat>,
    fix2: &QDivisor<Rat>,
) -> Result<bool> {
    let h1 = movable_sections(q1);
    let h2 = movable_sections(q2);
    let mut mark1 = vec![q1.boundary.clone(), fix1.clone()];
    let mut mark2 = vec![q2.boundary.clone(), fix2.clone()];
    for (f1, f2) in q1.sections.iter().zip(&q2.sections) {
        if !f1.is_zero() {
            mark1.push(divisor_from(&[(f1.clone(), Rat::one())])?);
            mark2.push(divisor_from(&[(f2.clone(), Rat::one())])?);
        }
    }
    let probes = (0..).map(|k| match k {
        0 => RationalPoint::affine(Rat::zero()),
        1 => RationalPoint::infinity(),
        k => RationalPoint::affine(int(k - 1)),
    });
    let mut anchors = Vec::new();
    for p in probes.take(3) {
        let w: Vec<Rat> = h2.iter().map(|h| h.eval(p.x(), p.y())).collect();
        let i = w.iter().position(|c| !c.is_zero()).expect("movable part is base point free");
        let j = (0..h2.len())
            .find(|&j| !h2[j].is_zero() && common_scalar(&h2[j..=j], &h2[i..=i]).is_none())
            .expect("non-constant quasimap has two independent sections");
        let combo = |h: &[BinaryForm<Rat>]| {
            h[j].scale(&w[i]).add(&h[i].scale(&-w[j].clone())).expect("same degree")
        };
        let c2 = combo(&h2);
        let c1 = combo(&h1);
        if c1.is_zero() {
            return Ok(false);
        }
        mark2.push(divisor_from(&[(c2, Rat::one())])?);
        mark1.push(divisor_from(&[(c1, Rat::one())])?);
        anchors.push(p);
    }
    let m1 = Marking { divisors: mark1 };
    let m2 = Marking { divisors: mark2 };
    let anchors: Vec<(RationalPoint, Vec<Rat>)> = anchors
        .into_iter()
        .map(|p| {
            let s = m2.signature(&p);
            (p, s)
        })
        .collect();
    match_triples(q1, q2, &anchors, &m1.points())
}

/// Rational points and the irrational remainder of a marking, grouped by
/// signature.
struct SplitMarking {
    points: Vec<(RationalPoint, Vec<Rat>)>,
    blocks: BTreeMap<Vec<Rat>, BinaryForm<Rat>>,
}

fn split_marking(divs: &[QDivisor<Rat>]) -> Result<SplitMarking> {
    // Common refinement of all supports.
    let pairs: Vec<(BinaryForm<Rat>, Rat)> = divs
        .iter()
        .flat_map(|d| d.terms().iter().map(|(c, _)| (c.form(), Rat::one())))
        .collect();
    let common = divisor_from(&pairs)?;
    let mut points = Vec::new();
    let mut blocks: BTreeMap<Vec<Rat>, BinaryForm<Rat>> = BTreeMap::new();
    for (cl, _) in common.terms() {
        let sig: Vec<Rat> = divs.iter().map(|d| d.coefficient_on(cl)).collect();
        let mut rest = cl.form();
        for p in cl.rational_points() {
            rest = rest.exact_div(&BinaryForm::vanishing_at(&p)).expect("root divides");
            points.push((p, sig.clone()));
        }
        if rest.degree() > 0 {
            let entry = blocks.entry(sig).or_insert_with(|| BinaryForm::new(vec![Rat::one()]));
            *entry = entry.mul(&rest).normalize();
        }
    }
    points.sort();
    Ok(SplitMarking { points, blocks })
}

impl QDivisor<Rat> {
    /// Coefficient on a cluster of a finer basis.
    fn coefficient_on(&self, c: &Cluster<Rat>) -> Rat {
        let f = c.form();
        self.terms()
            .iter()
            .find(|(d, _)| {
                let g = crate::binform::gcd_forms(&d.form(), &f).expect("nonzero");
                g.degree() > 0
            })
            .map(|(_, a)| a.clone())
            .unwrap_or_else(Rat::zero)
    }
}

fn sig_multiset(points: &[(RationalPoint, Vec<Rat>)]) -> Vec<Vec<Rat>> {
    let mut v: Vec<Vec<Rat>> = points.iter().map(|(_, s)| s.clone()).collect();
    v.sort();
    v
}

/// Rational `k`-th roots of `r`.
fn rational_roots_of(r: &Rat, k: u32) -> Vec<Rat> {
    if r.is_zero() {
        return vec![Rat::zero()];
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let c = n.abs().nth_root(k);
        (c.pow(k) == n.abs()).then_some(c)
    };
    let (Some(a), Some(b)) = (root(r.numer()), root(r.denom())) else {
        return Vec::new();
    };
    let base = Rat::new(a, b);
    if k % 2 == 1 {
        vec![if r.is_negative() { -base } else { base }]
    } else if r.is_negative() {
        Vec::new()
    } else {
        vec![base.clone(), -base]
    }
}

/// Matrix sending `[0:1] ↦ p` and `[1:0] ↦ q`.
fn frame_two(p: &RationalPoint, q: &RationalPoint) -> Result<MobiusMatrix<Rat>> {
    MobiusMatrix::new(q.x().clone(), p.x().clone(), q.y().clone(), p.y().clone())
}

/// Matrix sending `[1:0] ↦ p`.
fn frame_one(p: &RationalPoint) -> MobiusMatrix<Rat> {
    if p.is_infinity() {
        MobiusMatrix::identity()
    } else {
        MobiusMatrix::new(p.x().clone(), Rat::one(), Rat::one(), Rat::zero()).expect("invertible")
    }
}

fn constant_isomorphic(
    q1: &Quasimap<Rat>,
    q2: &Quasimap<Rat>,
    fix1: &QDivisor<Rat>,
    fix2: &QDivisor<Rat>,
) -> Result<bool> {
    let s1 = split_marking(&[q1.boundary.clone(), fix1.clone()])?;
    let s2 = split_marking(&[q2.boundary.clone(), fix2.clone()])?;
    let block_profile = |s: &SplitMarking| -> Vec<(Vec<Rat>, usize)> {
        s.blocks.iter().map(|(k, f)| (k.clone(), f.degree())).collect()
    };
    if sig_multiset(&s1.points) != sig_multiset(&s2.points) || block_profile(&s1) != block_profile(&s2)
    {
        return Ok(false);
    }
    let n_pts = s2.points.len();
    if n_pts >= 3 {
        let anchors = &s2.points[..3];
        return match_triples(q1, q2, anchors, &s1.points);
    }
    if s2.blocks.is_empty() {
        // Möbius maps act 2-transitively; matching signatures suffice.
        return Ok(true);
    }
    let (sig, b2) = s2.blocks.iter().next().unwrap();
    let b1 = &s1.blocks[sig];
    match n_pts {
        2 => {
            let (p2, q2pt) = (&s2.points[0], &s2.points[1]);
            let a2 = frame_two(&p2.0, &q2pt.0)?;
            let i2 = a2.substitute(b2);
            for (x, y) in s1.points.iter().flat_map(|x| s1.points.iter().map(move |y| (x, y))) {
                if x.0 == y.0 || x.1 != p2.1 || y.1 != q2pt.1 {
                    continue;
                }
                let a1 = frame_two(&x.0, &y.0)?;
                let i1 = a1.substitute(b1);
                let d = i1.degree();
                let ratio = (i2.coeff(d) * i1.coeff(0)) / (i2.coeff(0) * i1.coeff(d));
                for lam in rational_roots_of(&ratio, d as u32) {
                    let torus = MobiusMatrix::new(lam, Rat::zero(), Rat::zero(), Rat::one())?;
                    let phi = a1.compose(&torus).compose(&a2.inverse());
                    if verify_isomorphism(q1, q2, &phi) {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        1 => {
            let a2 = frame_one(&s2.points[0].0);
            let a1 = frame_one(&s1.points[0].0);
            let p2 = a2.substitute(b2).dehomogenize().monic();
            let p1 = a1.substitute(b1).dehomogenize().monic();
            let d = p2.degree().unwrap();
            let dr = Rat::from_integer(d.into());
            let mean2 = -p2.coeff(d - 1) / &dr;
            let mean1 = -p1.coeff(d - 1) / &dr;
            let c2 = shift_poly(&p2, &mean2);
            let c1 = shift_poly(&p1, &mean1);
            let k = (0..d.saturating_sub(1))
                .find(|&k| !c2.coeff(k).is_zero())
                .expect("squarefree block of degree ≥ 2 is not a pure power");
            if c1.coeff(k).is_zero() {
                return Ok(false);
            }
            for a in rational_roots_of(&(c1.coeff(k) / c2.coeff(k)), (d - k) as u32) {
                if a.is_zero() {
                    continue;
                }
                let b = &mean1 - &a * &mean2;
                let affine = MobiusMatrix::new(a, b, Rat::zero(), Rat::one())?;
                let phi = a1.compose(&affine).compose(&a2.inverse());
                if verify_isomorphism(q1, q2, &phi) {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => {
            if s2.blocks.len() == 1 && b2.degree() == 2 {
                // Two irrational conjugate points: equivalent iff they span
                // the same quadratic field.
                let disc = |f: &BinaryForm<Rat>| {
                    f.coeff(1) * f.coeff(1) - int(4) * f.coeff(0) * f.coeff(2)
                };
                let r = disc(b1) / disc(b2);
                return Ok(!rational_roots_of(&r, 2).is_empty());
            }
            Err(Error::Unsupported(
                "constant quasimaps whose marked support has no rational point".into(),
            ))
        }
    }
}

/// `p(x + a)`.
fn shift_poly(p: &crate::poly::Poly<Rat>, a: &Rat) -> crate::poly::Poly<Rat> {
    let lin = crate::poly::Poly::new(vec![a.clone(), Rat::one()]);
    p.coeffs()
        .iter()
        .rev()
        .fold(crate::poly::Poly::zero(), |acc, c| acc.mul(&lin).add(&crate::poly::Poly::constant(c.clone())))
}

/// JSON shape of a quasimap before validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasimapInput {
    pub degree: usize,
    #[serde(with = "rat_string")]
    pub weight: Rat,
    pub sections: Vec<BinaryForm<Rat>>,
    #[serde(default)]
    pub boundary: QDivisor<Rat>,
    #[serde(default = "one_u32")]
    pub r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ConeTarget>,
}

impl QuasimapInput {
    pub fn build(self) -> Result<Quasimap<Rat>> {
        make_quasimap(self.degree, self.weight, self.sections, self.boundary, self.r, self.target)
    }
}

fn one_u32() -> u32 {
    1
}

impl Serialize for Quasimap<Rat> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuasimapInput {
            degree: self.degree,
            weight: self.weight.clone(),
            sections: self.sections.clone(),
            boundary: self.boundary.clone(),
            r: self.r,
            target: self.target.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quasimap<Rat> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        QuasimapInput::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub cluster: serde_json::Value,
    #[serde(with = "rat_string")]
    pub multiplicity: Rat,
}

/// Machine-readable classification result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub class: Stability,
    #[serde(with = "rat_string")]
    pub delta: Rat,
    #[serde(with = "rat_string")]
    pub mu: Rat,
    #[serde(with = "rat_string")]
    pub v: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

impl Quasimap<Rat> {
    pub fn report(&self) -> ClassificationReport {
        let c = self.classify();
        let inv = self.invariants();
        ClassificationReport {
            class: c.class,
            delta: self.delta(),
            mu: inv.mu,
            v: inv.v,
            witness: c.witness.map(|w| WitnessJson {
                cluster: serde_json::to_value(&w.cluster).expect("serializable"),
                multiplicity: w.multiplicity,
            }),
        }
    }
}

impl Serialize for DegenerationReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DegenerationReport", 4)?;
        st.serialize_field("center", &self.center)?;
        st.serialize_field("central_fiber", &self.central_fiber)?;
        st.serialize_field("beta", &rat_to_string(&self.beta))?;
        st.serialize_field("is_product_type", &self.is_product_type)?;
        st.end()
    }
}
