//! Dense univariate polynomials over a [`Field`], lowest degree first.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{Field, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![F::one()] }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `x - a`.
    pub fn linear_root(a: F) -> Self {
        Self::new(vec![-a, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading(&self) -> &F {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    /// Order of vanishing at `x = 0`; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dj.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_rem(self).1.is_zero()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = F::one() / self.leading().clone();
        self.scale(&inv)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        F::poly_gcd(self, o)
    }

    /// Plain Euclidean algorithm.
    pub fn euclid_gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let mut k = F::zero();
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(c.clone() * k.clone());
            }
            k = k + F::one();
        }
        Self::new(out)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Divides out every factor `x`.
    pub fn strip_x(&self) -> (Self, usize) {
        match self.valuation() {
            None => (self.clone(), 0),
            Some(v) => (Self::new(self.coeffs[v..].to_vec()), v),
        }
    }
}

impl Poly<Rat> {
    /// Integer primitive associate with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut content = Rat::normalizer(&self.coeffs);
        if self.leading().is_negative() != content.is_negative() {
            content = -content;
        }
        self.coeffs
            .iter()
            .map(|c| {
                let q = c / &content;
                debug_assert!(q.is_integer());
                q.to_integer()
            })
            .collect()
    }

    /// All distinct rational roots.
    ///
    /// Roots are found modulo a small prime where the squarefree part stays
    /// squarefree, lifted p-adically and recovered by rational reconstruction.
    /// Every candidate is verified exactly.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sqf = self.div_rem(&self.gcd(&self.derivative())).0;
        let (core, zero_mult) = sqf.strip_x();
        let mut roots = Vec::new();
        if zero_mult > 0 {
            roots.push(Rat::zero());
        }
        if core.degree().unwrap_or(0) == 0 {
            return roots;
        }
        if core.degree() == Some(1) {
            roots.push(-core.coeff(0) / core.coeff(1));
            roots.sort();
            return roots;
        }
        let f = core.primitive_integer();
        let num_bound = f[0].abs();
        let den_bound = f[f.len() - 1].abs();
        let target = BigInt::from(2u32) * &num_bound * &den_bound;
        let p = choose_prime(&f);
        let pb = BigInt::from(p);
        let df: Vec<BigInt> = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        for r0 in roots_mod_p(&f, p) {
            let mut modulus = pb.clone();
            let mut r = BigInt::from(r0);
            while modulus <= target {
                modulus = &modulus * &modulus;
                let fv = eval_mod(&f, &r, &modulus);
                let dv = eval_mod(&df, &r, &modulus);
                let inv = mod_inverse(&dv, &modulus).expect("simple root stays simple");
                r = (r - fv * inv).mod_floor(&modulus);
            }
            if let Some(q) = rational_reconstruction(&r, &modulus, &num_bound, &den_bound) {
                if core.eval(&q).is_zero() {
                    roots.push(q);
                }
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

fn large_primes() -> &'static [u64] {
    static PRIMES: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    PRIMES.get_or_init(|| (1u64 << 30..1u64 << 31).rev().filter(|&n| is_prime(n)).take(64).collect())
}

fn symmetric(r: &BigInt, m: &BigInt) -> BigInt {
    if r * BigInt::from(2) > *m {
        r - m
    } else {
        r.clone()
    }
}

/// Monic gcd over ℚ by images modulo word-size primes, combined by CRT and
/// confirmed by exact division. Falls back to Euclid if the primes run out.
pub(crate) fn modular_gcd(a: &Poly<Rat>, b: &Poly<Rat>) -> Poly<Rat> {
    if a.is_zero() || b.is_zero() {
        return a.euclid_gcd(b);
    }
    let (fa, fb) = (a.primitive_integer(), b.primitive_integer());
    let lc = fa[fa.len() - 1].gcd(&fb[fb.len() - 1]);
    let mut best: Option<(usize, Vec<BigInt>, BigInt)> = None;
    for &p in large_primes() {
        let pb = BigInt::from(p);
        if (&lc % &pb).is_zero() || (&fa[fa.len() - 1] % &pb).is_zero() || (&fb[fb.len() - 1] % &pb).is_zero() {
            continue;
        }
        let g = modp::gcd(to_mod_p(&fa, p), to_mod_p(&fb, p), p);
        let d = g.len() - 1;
        if d == 0 {
            return Poly::one();
        }
        let lcp = (&lc % &pb).to_u64().unwrap();
        let image: Vec<BigInt> = g.iter().map(|&c| BigInt::from(c * lcp % p)).collect();
        let (cur_d, coeffs, modulus) = match best.take() {
            Some((bd, _, _)) if d > bd => {
                // unlucky prime
                continue;
            }
            Some((bd, cs, m)) if d == bd => {
                let inv = mod_inverse(&(&m % &pb), &pb).expect("distinct primes");
                let cs = cs
                    .iter()
                    .zip(&image)
                    .map(|(c, r)| c + &m * ((r - c) * &inv).mod_floor(&pb))
                    .collect();
                (d, cs, m * &pb)
            }
            _ => (d, image, pb.clone()),
        };
        let cand = Poly::new(coeffs.iter().map(|c| Rat::from_integer(symmetric(c, &modulus))).collect());
        best = Some((cur_d, coeffs, modulus));
        if cand.degree() == Some(cur_d) && cand.divides(a) && cand.divides(b) {
            return cand.monic();
        }
    }
    a.euclid_gcd(b)
}

fn eval_mod(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    f.iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Finds `a/b ≡ r (mod m)` with `|a| ≤ n`, `0 < b ≤ d`.
fn rational_reconstruction(r: &BigInt, m: &BigInt, n: &BigInt, d: &BigInt) -> Option<Rat> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > n {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > d {
        return None;
    }
    let (a, b) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    if !a.gcd(&b).is_one() {
        return None;
    }
    Some(Rat::new(a, b))
}

fn to_mod_p(f: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    f.iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("reduced residue"))
        .collect()
}

fn roots_mod_p(f: &[BigInt], p: u64) -> Vec<u64> {
    let fp = to_mod_p(f, p);
    (0..p)
        .filter(|&x| fp.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0)
        .collect()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Smallest odd prime not dividing the leading coefficient for which the
/// reduction of `f` stays squarefree.
fn choose_prime(f: &[BigInt]) -> u64 {
    let lead = &f[f.len() - 1];
    (3u64..)
        .filter(|&p| is_prime(p))
        .find(|&p| {
            if (lead % BigInt::from(p)).is_zero() {
                return false;
            }
            let fp = to_mod_p(f, p);
            let dfp: Vec<u64> = fp
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| (c * (i as u64 % p)) % p)
                .collect();
            modp::gcd_degree(fp, dfp, p) == 0
        })
        .expect("some prime keeps a squarefree polynomial squarefree")
}

mod modp {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    fn rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
        let db = b.len() - 1;
        let inv = pow_mod(b[db], p - 2, p);
        while a.len() > db {
            let k = a.len() - 1 - db;
            let c = a[a.len() - 1] * inv % p;
            for (j, bj) in b.iter().enumerate() {
                a[k + j] = (a[k + j] + p - c * bj % p) % p;
            }
            trim(&mut a);
        }
        a
    }

    pub fn gcd_degree(a: Vec<u64>, b: Vec<u64>, p: u64) -> usize {
        gcd(a, b, p).len().saturating_sub(1)
    }

    /// Monic gcd; empty only when both inputs vanish.
    pub fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(a, &b, p);
            a = b;
            b = r;
        }
        if let Some(&l) = a.last() {
            let inv = pow_mod(l, p - 2, p);
            for c in a.iter_mut() {
                *c = *c * inv % p;
            }
        }
        a
    }
}
