//! Weierstrass elliptic surfaces `y²z = x³ + A·xz² + B·z³` over ℙ¹ with
//! `deg A = 4k`, `deg B = 6k`.
//!
//! The discriminant divisor of the canonical bundle formula is read off the
//! Kodaira fiber types, and the moduli part from the j-map `[A³ : Δ]`. The
//! latter, taken with weight 1/12, is the associated quasimap, whose fixed
//! part reproduces the discriminant divisor.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::binform::{coprime_squarefree_basis, rat_string, BinaryForm};
use crate::divisor::{divisor_from, max_multiplicity, Cluster, QDivisor};
use crate::error::{Error, Result};
use crate::field::{int, rat, Rat};
use crate::qmap::{make_quasimap, Quasimap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    k: usize,
    a: BinaryForm<Rat>,
    b: BinaryForm<Rat>,
}

fn model_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::DegenerateModel(msg.into()))
}

pub fn make_weierstrass(k: usize, a: BinaryForm<Rat>, b: BinaryForm<Rat>) -> Result<WeierstrassModel> {
    if k == 0 {
        return model_err("k must be positive");
    }
    if a.degree() != 4 * k || b.degree() != 6 * k {
        return model_err(format!(
            "expected degrees ({}, {}), got ({}, {})",
            4 * k,
            6 * k,
            a.degree(),
            b.degree()
        ));
    }
    let w = WeierstrassModel { k, a, b };
    if w.discriminant().is_zero() {
        return model_err("discriminant vanishes identically");
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaType {
    /// `I_n`, `n ≥ 1`.
    I(u32),
    II,
    III,
    IV,
    /// `I_n*`, `n ≥ 0`.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    pub fn lct(self) -> Rat {
        match self {
            KodairaType::I(_) => Rat::one(),
            KodairaType::II => rat(5, 6),
            KodairaType::III => rat(3, 4),
            KodairaType::IV => rat(2, 3),
            KodairaType::IStar(_) => rat(1, 2),
            KodairaType::IVStar => rat(1, 3),
            KodairaType::IIIStar => rat(1, 4),
            KodairaType::IIStar => rat(1, 6),
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Fiber type from the vanishing orders of `A`, `B` (`None` for the zero
/// form) and `Δ` at a point with `ordΔ > 0`. `None` for non-minimal data.
pub fn kodaira_type(ord_a: Option<u32>, ord_b: Option<u32>, ord_d: u32) -> Option<KodairaType> {
    let oa = ord_a.unwrap_or(u32::MAX);
    let ob = ord_b.unwrap_or(u32::MAX);
    if ord_d == 0 {
        return None;
    }
    Some(match (oa, ob) {
        (0, 0) => KodairaType::I(ord_d),
        (_, 1) => KodairaType::II,
        (1, _) => KodairaType::III,
        (_, 2) => KodairaType::IV,
        (2, 3) => KodairaType::IStar(ord_d - 6),
        (2, _) | (_, 3) => KodairaType::IStar(0),
        (_, 4) => KodairaType::IVStar,
        (3, _) => KodairaType::IIIStar,
        (_, 5) => KodairaType::IIStar,
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KodairaEntry {
    pub cluster: Cluster<Rat>,
    pub ord_a: Option<u32>,
    pub ord_b: Option<u32>,
    pub ord_delta: u32,
    #[serde(rename = "type")]
    pub kind: KodairaType,
    #[serde(with = "rat_string")]
    pub lct: Rat,
}

impl KodairaEntry {
    /// `min(3·ordA, ordΔ)`, the order of the gcd of `A³` and `Δ`.
    pub fn fixed_order(&self) -> u32 {
        self.ord_a.map_or(self.ord_delta, |a| (3 * a).min(self.ord_delta))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Adiabatic {
    StrictlyStable,
    StrictlySemistableOnly,
    Unstable,
}

impl WeierstrassModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> &BinaryForm<Rat> {
        &self.a
    }

    pub fn b(&self) -> &BinaryForm<Rat> {
        &self.b
    }

    /// `4A³ + 27B²`.
    pub fn discriminant(&self) -> BinaryForm<Rat> {
        let a3 = self.a.pow(3).scale(&int(4));
        let b2 = self.b.pow(2).scale(&int(27));
        a3.add(&b2).expect("both of degree 12k")
    }

    /// Basis of the nonzero forms among `A`, `B`, `Δ`, with the orders of
    /// each (`None` for a zero form).
    fn orders(&self) -> Vec<(BinaryForm<Rat>, Option<u32>, Option<u32>, u32)> {
        let d = self.discriminant();
        let forms: Vec<&BinaryForm<Rat>> =
            [&self.a, &self.b, &d].into_iter().filter(|f| !f.is_zero()).collect();
        let owned: Vec<BinaryForm<Rat>> = forms.iter().map(|f| (*f).clone()).collect();
        let (basis, exps) = coprime_squarefree_basis(&owned).expect("nonzero forms");
        let mut row = exps.iter();
        let ea = (!self.a.is_zero()).then(|| row.next().unwrap());
        let eb = (!self.b.is_zero()).then(|| row.next().unwrap());
        let ed = row.next().unwrap();
        basis
            .into_iter()
            .enumerate()
            .map(|(j, g)| (g, ea.map(|e| e[j]), eb.map(|e| e[j]), ed[j]))
            .collect()
    }

    pub fn is_minimal(&self) -> bool {
        self.orders()
            .iter()
            .all(|(_, a, b, _)| a.is_some_and(|a| a < 4) || b.is_some_and(|b| b < 6))
    }

    /// Divides `(A, B)` by `(g⁴, g⁶)` for the largest such `g`.
    pub fn minimalize(&self) -> Result<WeierstrassModel> {
        let mut g = BinaryForm::new(vec![Rat::one()]);
        for (b, oa, ob, _) in self.orders() {
            let e = oa.map_or(u32::MAX, |a| a / 4).min(ob.map_or(u32::MAX, |b| b / 6));
            g = g.mul(&b.pow(e));
        }
        if g.degree() == 0 {
            return Ok(self.clone());
        }
        let k = self.k - g.degree();
        if k == 0 {
            return model_err("minimal model would have k = 0");
        }
        let div = |f: &BinaryForm<Rat>, e: u32, deg: usize| {
            if f.is_zero() {
                BinaryForm::zero(deg)
            } else {
                f.exact_div(&g.pow(e)).expect("g⁴ | A and g⁶ | B")
            }
        };
        make_weierstrass(k, div(&self.a, 4, 4 * k), div(&self.b, 6, 6 * k))
    }

    fn require_minimal(&self) -> Result<()> {
        if self.is_minimal() {
            Ok(())
        } else {
            Err(Error::PreconditionViolated("Weierstrass model is not minimal".into()))
        }
    }

    pub fn kodaira_profile(&self) -> Result<Vec<KodairaEntry>> {
        self.require_minimal()?;
        let mut out = Vec::new();
        for (g, oa, ob, od) in self.orders() {
            if od == 0 {
                continue;
            }
            let kind = kodaira_type(oa, ob, od).expect("minimal model");
            let cluster = if g == BinaryForm::y() {
                Cluster::Infinity
            } else {
                Cluster::Finite(g.dehomogenize())
            };
            out.push(KodairaEntry { cluster, ord_a: oa, ord_b: ob, ord_delta: od, lct: kind.lct(), kind });
        }
        let total: usize = out.iter().map(|e| e.cluster.degree() * e.ord_delta as usize).sum();
        assert_eq!(total, 12 * self.k, "Kodaira profile must account for all of Δ");
        out.sort_by(|a, b| a.cluster.cmp(&b.cluster));
        Ok(out)
    }

    /// `Σ (1 − lct)·cluster` and the degree of the moduli part.
    pub fn discriminant_divisor(&self) -> Result<(QDivisor<Rat>, Rat)> {
        let profile = self.kodaira_profile()?;
        let mut fixed = 0usize;
        let mut pairs = Vec::new();
        for e in &profile {
            let f = e.fixed_order();
            assert_eq!(
                Rat::from_integer(f.into()),
                int(12) * (Rat::one() - &e.lct),
                "fixed-part identity fails for {}",
                e.kind
            );
            fixed += e.cluster.degree() * f as usize;
            if !e.lct.is_one() {
                pairs.push((e.cluster.form(), Rat::one() - &e.lct));
            }
        }
        let moduli = Rat::new((12 * self.k - fixed).into(), 12.into());
        Ok((divisor_from(&pairs)?, moduli))
    }

    pub fn adiabatic_kstable(&self) -> Result<Adiabatic> {
        if self.k != 1 {
            return Err(Error::Unsupported(format!(
                "adiabatic criterion for k = {} (only k = 1 is covered)",
                self.k
            )));
        }
        let (disc, moduli) = self.discriminant_divisor()?;
        let half = (disc.degree() + moduli) / int(2);
        let (max, _) = max_multiplicity(&disc);
        Ok(if max < half {
            Adiabatic::StrictlyStable
        } else if max == half {
            Adiabatic::StrictlySemistableOnly
        } else {
            Adiabatic::Unstable
        })
    }

    /// `[A³ : Δ]` as a quasimap of degree `12k` and weight `1/12`.
    pub fn associated_quasimap(&self) -> Result<Quasimap<Rat>> {
        self.require_minimal()?;
        make_quasimap(
            12 * self.k,
            rat(1, 12),
            vec![self.a.pow(3), self.discriminant()],
            QDivisor::zero(),
            1,
            None,
        )
    }

    /// Everything at once, on the minimal model.
    pub fn analyze(&self) -> Result<EllipticReport> {
        let w = self.minimalize()?;
        let (disc, moduli) = w.discriminant_divisor()?;
        let adiabatic = match w.adiabatic_kstable() {
            Ok(a) => Some(a),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(EllipticReport {
            model: w.clone(),
            discriminant: w.discriminant(),
            profile: w.kodaira_profile()?,
            disc_divisor: disc,
            moduli_degree: moduli,
            adiabatic,
            associated: w.associated_quasimap()?,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelInput {
    pub k: usize,
    #[serde(rename = "A")]
    pub a: BinaryForm<Rat>,
    #[serde(rename = "B")]
    pub b: BinaryForm<Rat>,
}

impl ModelInput {
    pub fn build(self) -> Result<WeierstrassModel> {
        make_weierstrass(self.k, self.a, self.b)
    }
}

impl Serialize for WeierstrassModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModelInput { k: self.k, a: self.a.clone(), b: self.b.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeierstrassModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ModelInput::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EllipticReport {
    pub model: WeierstrassModel,
    pub discriminant: BinaryForm<Rat>,
    pub profile: Vec<KodairaEntry>,
    pub disc_divisor: QDivisor<Rat>,
    #[serde(with = "rat_string")]
    pub moduli_degree: Rat,
    /// Absent when `k ≠ 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adiabatic: Option<Adiabatic>,
    pub associated: Quasimap<Rat>,
}
