//! Random instance generators shared by the property and acceptance suites.
#![allow(dead_code)]

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qmapk::cmdeg::{make_pencil, BiForm, PencilFamily};
use qmapk::divisor::divisor_from;
use qmapk::elliptic::{make_weierstrass, WeierstrassModel};
use qmapk::field::{int, rat};
use qmapk::{make_quasimap, BinaryForm, MobiusMatrix, Poly, Quasimap, Rat, RationalPoint};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rat(g: &mut impl Rng) -> Rat {
    rat(g.gen_range(-6..=6), g.gen_range(1..=4))
}

pub fn nonzero_rat(g: &mut impl Rng) -> Rat {
    loop {
        let r = small_rat(g);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn random_point(g: &mut impl Rng) -> RationalPoint {
    if g.gen_ratio(1, 8) {
        RationalPoint::infinity()
    } else {
        RationalPoint::affine(small_rat(g))
    }
}

/// `n` distinct points avoiding `avoid`.
pub fn fresh_points(g: &mut impl Rng, n: usize, avoid: &[RationalPoint]) -> Vec<RationalPoint> {
    let mut out: Vec<RationalPoint> = Vec::new();
    while out.len() < n {
        let p = random_point(g);
        if !out.contains(&p) && !avoid.contains(&p) {
            out.push(p);
        }
    }
    out
}

pub fn one_form() -> BinaryForm<Rat> {
    BinaryForm::new(vec![Rat::one()])
}

pub fn product(forms: &[BinaryForm<Rat>]) -> BinaryForm<Rat> {
    forms.iter().fold(one_form(), |acc, f| acc.mul(f))
}

/// `(x − a·y)² + c·y²` with `c > 0`: irreducible over ℚ.
pub fn irreducible_quadratic(g: &mut impl Rng) -> BinaryForm<Rat> {
    let a = small_rat(g);
    let c = int(*[1, 2, 3, 5].choose(g).unwrap());
    BinaryForm::new(vec![&a * &a + c, int(-2) * a, Rat::one()])
}

pub fn random_mobius(g: &mut impl Rng) -> MobiusMatrix<Rat> {
    loop {
        let e: Vec<Rat> = (0..4)
            .map(|_| if g.gen_ratio(1, 4) { small_rat(g) } else { int(g.gen_range(-4..=4)) })
            .collect();
        if let Ok(m) = MobiusMatrix::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) {
            return m;
        }
    }
}

pub fn lcm_of_denominators(cs: &[Rat]) -> u32 {
    let l = cs.iter().fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    u32::try_from(l).expect("small denominators")
}

pub const WEIGHTS: [(i64, i64); 8] = [(1, 12), (1, 6), (1, 4), (1, 3), (1, 2), (2, 3), (1, 1), (3, 2)];

pub fn random_weight(g: &mut impl Rng) -> Rat {
    let (n, d) = *WEIGHTS.choose(g).unwrap();
    rat(n, d)
}

/// A quasimap built from known factors, together with the multiplicities of
/// `B + u·B′` at every point of its support.
pub struct Planted {
    pub q: Quasimap,
    pub rational: Vec<(RationalPoint, Rat)>,
    /// Coefficients of irreducible quadratic clusters, one entry per cluster.
    pub quadratic: Vec<Rat>,
    pub movable: usize,
}

impl Planted {
    pub fn mu(&self) -> Rat {
        let b: Rat = self.q.boundary().degree();
        b + self.q.weight() * int(self.q.degree() as i64)
    }

    pub fn max_mult(&self) -> Rat {
        self.rational
            .iter()
            .map(|(_, a)| a.clone())
            .chain(self.quadratic.iter().cloned())
            .fold(Rat::zero(), |a, b| a.max(b))
    }

    /// δ from the planted support alone.
    pub fn oracle_delta(&self) -> Rat {
        let u = self.q.weight().clone();
        let mu = self.mu();
        let top = self.max_mult();
        let two = int(2);
        if mu >= two || top >= Rat::one() || (self.movable > 0 && u >= Rat::one()) {
            return Rat::zero();
        }
        let v = &two - &mu;
        let mut d = &two / &v;
        if self.movable > 0 {
            d = d.min(&two * (Rat::one() - &u) / &v);
        }
        d.min(&two * (Rat::one() - top) / &v)
    }
}

pub fn planted_quasimap(g: &mut impl Rng, max_degree: usize, max_sections: usize) -> Planted {
    let m = g.gen_range(1..=max_degree);
    let u = random_weight(g);
    // fixed part: rational points with exponents, maybe one quadratic
    let mut fixed_factors: Vec<BinaryForm<Rat>> = Vec::new();
    let mut fixed_pts: Vec<(RationalPoint, u32)> = Vec::new();
    let mut quad: Option<(BinaryForm<Rat>, u32)> = None;
    let mut budget = if g.gen_ratio(1, 3) { 0 } else { g.gen_range(0..=m) };
    if g.gen_ratio(1, 6) {
        budget = m;
    }
    if budget >= 2 && g.gen_ratio(1, 4) {
        let e = g.gen_range(1..=budget / 2) as u32;
        let f = irreducible_quadratic(g);
        fixed_factors.push(f.pow(e));
        quad = Some((f, e));
        budget -= 2 * e as usize;
    }
    while budget > 0 {
        let e = g.gen_range(1..=budget) as u32;
        let known: Vec<RationalPoint> = fixed_pts.iter().map(|(p, _)| p.clone()).collect();
        let p = fresh_points(g, 1, &known).pop().unwrap();
        fixed_factors.push(BinaryForm::vanishing_at(&p).pow(e));
        fixed_pts.push((p, e));
        budget -= e as usize;
    }
    let fixed = product(&fixed_factors);
    let movable = m - fixed.degree();
    let n_sections = g.gen_range(2..=max_sections.max(2));
    let mut sections = Vec::new();
    if movable == 0 {
        for _ in 0..n_sections {
            let c = if g.gen_ratio(1, 5) { Rat::zero() } else { nonzero_rat(g) };
            sections.push(fixed.scale(&c));
        }
        if sections.iter().all(|s| s.is_zero()) {
            sections[0] = fixed.clone();
        }
    } else {
        let p0: Vec<RationalPoint> = (0..movable).map(|_| random_point(g)).collect();
        let p1: Vec<RationalPoint> = {
            let mut distinct = p0.clone();
            distinct.dedup();
            (0..movable).map(|_| fresh_points(g, 1, &distinct).pop().unwrap()).collect()
        };
        let h0 = product(&p0.iter().map(BinaryForm::vanishing_at).collect::<Vec<_>>());
        let h1 = product(&p1.iter().map(BinaryForm::vanishing_at).collect::<Vec<_>>());
        sections.push(fixed.mul(&h0).scale(&nonzero_rat(g)));
        sections.push(fixed.mul(&h1).scale(&nonzero_rat(g)));
        for _ in 2..n_sections {
            let mix = h0.scale(&small_rat(g)).add(&h1.scale(&small_rat(g))).unwrap();
            sections.push(fixed.mul(&mix));
        }
        sections.shuffle(g);
    }
    // boundary on a few points, some shared with the fixed part
    let mut pairs: Vec<(BinaryForm<Rat>, Rat)> = Vec::new();
    let mut bpts: Vec<(RationalPoint, Rat)> = Vec::new();
    let nb = g.gen_range(0..=3);
    for _ in 0..nb {
        let p = if !fixed_pts.is_empty() && g.gen_bool(0.4) {
            fixed_pts.choose(g).unwrap().0.clone()
        } else {
            random_point(g)
        };
        if bpts.iter().any(|(q, _)| *q == p) {
            continue;
        }
        let c = rat(g.gen_range(1..=5), *[2, 3, 4, 6].choose(g).unwrap());
        if c >= Rat::one() {
            continue;
        }
        pairs.push((BinaryForm::vanishing_at(&p), c.clone()));
        bpts.push((p, c));
    }
    let mut quad_coeff = quad.as_ref().map(|(_, e)| &u * int(*e as i64));
    if let Some((f, _)) = quad.as_ref().filter(|_| g.gen_ratio(1, 3)) {
        let c = rat(1, 4);
        pairs.push((f.clone(), c.clone()));
        quad_coeff = quad_coeff.map(|a| a + c);
    }
    let boundary = divisor_from(&pairs).unwrap();
    let r = lcm_of_denominators(&pairs.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>());
    let q = make_quasimap(m, u.clone(), sections, boundary, r, None).unwrap();

    let mut rational: Vec<(RationalPoint, Rat)> = Vec::new();
    for (p, e) in &fixed_pts {
        rational.push((p.clone(), &u * int(*e as i64)));
    }
    for (p, c) in bpts {
        match rational.iter_mut().find(|(q, _)| *q == p) {
            Some(slot) => slot.1 += c,
            None => rational.push((p, c)),
        }
    }
    Planted { q, rational, quadratic: quad_coeff.into_iter().collect(), movable }
}

pub fn random_quasimap(g: &mut impl Rng) -> Quasimap {
    planted_quasimap(g, 6, 3).q
}

/// A random bihomogeneous form of bidegree `(p, q)` with small integer entries.
pub fn random_biform(g: &mut impl Rng, p: usize, q: usize) -> BiForm {
    let rows = (0..=p)
        .map(|_| (0..=q).map(|_| if g.gen_ratio(1, 3) { Rat::zero() } else { int(g.gen_range(-4..=4)) }).collect())
        .collect();
    BiForm::new(rows).unwrap()
}

/// A random pencil of bidegree `(m, k)`; boundary components are horizontal
/// lines `x = a·y` or irreducible graphs of bidegree `(1, 1)`.
pub fn random_pencil(g: &mut impl Rng) -> Option<PencilFamily> {
    let m = g.gen_range(1..=4);
    let k = g.gen_range(0..=2);
    let u = random_weight(g);
    let n = g.gen_range(2..=3);
    let sections: Vec<BiForm> = (0..n).map(|_| random_biform(g, m, k)).collect();
    let mut boundary = Vec::new();
    for _ in 0..g.gen_range(0..=2) {
        let c = rat(g.gen_range(1..=2), *[3, 4, 6].choose(g).unwrap());
        let b = if g.gen_bool(0.5) { random_biform(g, 1, 0) } else { random_biform(g, 1, 1) };
        let e = b.coeffs();
        let reducible = e[0].len() == 2 && &e[0][0] * &e[1][1] == &e[0][1] * &e[1][0];
        if b.is_zero() || reducible {
            continue;
        }
        boundary.push((b, c));
    }
    make_pencil(m, k, u, sections, boundary).ok()
}

/// Weierstrass templates planting one special fiber at `x = 0`.
#[derive(Clone, Copy, Debug)]
pub enum Plant {
    Generic,
    /// `I_n` for `n ≤ 6`
    Multiplicative(u32),
    /// `I_n*` for `n ≤ 3`
    StarMultiplicative(u32),
    /// additive fiber with `ord A ≥ a`, `ord B = b` exactly
    Additive(u32, u32),
    ZeroA,
}

pub const PLANTS: [Plant; 14] = [
    Plant::Generic,
    Plant::Multiplicative(2),
    Plant::Multiplicative(3),
    Plant::Multiplicative(6),
    Plant::StarMultiplicative(0),
    Plant::StarMultiplicative(1),
    Plant::StarMultiplicative(3),
    Plant::Additive(1, 1),
    Plant::Additive(1, 2),
    Plant::Additive(2, 2),
    Plant::Additive(3, 4),
    Plant::Additive(3, 5),
    Plant::Additive(4, 5),
    Plant::ZeroA,
];

fn random_form(g: &mut impl Rng, d: usize) -> BinaryForm<Rat> {
    BinaryForm::new((0..=d).map(|_| int(g.gen_range(-5..=5))).collect())
}

fn x_pow(e: u32) -> BinaryForm<Rat> {
    BinaryForm::x().pow(e)
}

/// A random k = 1 model, moved by a random Möbius map. `None` when the draw
/// is degenerate or non-minimal.
pub fn random_weierstrass(g: &mut impl Rng, plant: Plant) -> Option<WeierstrassModel> {
    let (a, b) = match plant {
        Plant::Generic => (random_form(g, 4), random_form(g, 6)),
        Plant::Multiplicative(n) => {
            let h = random_form(g, 2);
            let a = h.mul(&h).scale(&int(-3));
            let b = h.pow(3).scale(&int(2)).add(&x_pow(n).mul(&random_form(g, 6 - n as usize))).ok()?;
            (a, b)
        }
        Plant::StarMultiplicative(n) => {
            let h = random_form(g, 1);
            let a = h.mul(&h).scale(&int(-3)).mul(&x_pow(2));
            let inner = if n == 0 {
                random_form(g, 3)
            } else {
                h.pow(3).scale(&int(2)).add(&x_pow(n).mul(&random_form(g, 3 - n as usize))).ok()?
            };
            (a, inner.mul(&x_pow(3)))
        }
        Plant::Additive(oa, ob) => {
            let a = x_pow(oa).mul(&random_form(g, 4 - oa as usize));
            let mut rest = random_form(g, 6 - ob as usize);
            // ord B exactly ob
            let c0 = rest.coeff(0).clone();
            if c0.is_zero() {
                let mut cs = rest.coeffs().to_vec();
                cs[0] = Rat::one();
                rest = BinaryForm::new(cs);
            }
            (a, x_pow(ob).mul(&rest))
        }
        Plant::ZeroA => (BinaryForm::zero(4), random_form(g, 6)),
    };
    let m = random_mobius(g);
    let a = m.substitute(&a);
    let b = m.substitute(&b);
    let w = make_weierstrass(1, a, b).ok()?;
    if w.is_minimal() {
        Some(w)
    } else {
        None
    }
}

/// A stable-ish quasimap pushed into a bad special fiber by `x → t^a·x` at
/// a random center, with higher-order noise. Coefficient rows are indexed by
/// x-power; each row is a polynomial in `t`.
pub fn degenerating_rows(
    f: &BinaryForm<Rat>,
    a: usize,
    center: &Rat,
    noise: Option<(&BinaryForm<Rat>, usize)>,
) -> Vec<Poly<Rat>> {
    // f(t^a·x + c·y, y): coefficient of x^j is t^{a·j}·Σ_i f_i·C(i,j)·c^{i−j}
    let m = f.degree();
    let shifted = MobiusMatrix::new(Rat::one(), center.clone(), Rat::zero(), Rat::one()).unwrap().substitute(f);
    let mut rows: Vec<Vec<Rat>> = (0..=m)
        .map(|j| {
            let mut row = vec![Rat::zero(); a * j + 1];
            row[a * j] = shifted.coeff(j).clone();
            row
        })
        .collect();
    if let Some((h, e)) = noise {
        for (j, c) in h.coeffs().iter().enumerate() {
            if rows[j].len() <= e {
                rows[j].resize(e + 1, Rat::zero());
            }
            rows[j][e] += c;
        }
    }
    rows.into_iter().map(Poly::new).collect()
}

pub fn sign(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Total degree of the fixed part carried by each coefficient.
pub fn fixed_profile(q: &Quasimap) -> std::collections::BTreeMap<Rat, usize> {
    let (fixed, _) = q.fixed_movable();
    let mut out = std::collections::BTreeMap::new();
    for (c, a) in fixed.terms() {
        *out.entry(a.clone()).or_insert(0) += c.degree();
    }
    out
}

/// Divides every row by the largest power of `t` dividing all of them.
pub fn strip_t_content(rows: Vec<Poly<Rat>>) -> Vec<Poly<Rat>> {
    let v = rows
        .iter()
        .filter_map(|p| p.coeffs().iter().position(|c| !c.is_zero()))
        .min()
        .unwrap_or(0);
    rows.into_iter()
        .map(|p| Poly::new(p.coeffs().iter().skip(v).cloned().collect()))
        .collect()
}
