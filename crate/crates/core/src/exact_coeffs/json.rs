//! JSON form of [`EpsLaurent`]. Integers that can grow without bound are
//! written as decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{EpsLaurent, Monomial, PolyExpr, Var, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoJson {
    pub g: u32,
    pub t: u32,
    pub q: i32,
    #[serde(rename = "E")]
    pub e: i32,
    pub tau: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub mono: MonoJson,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub eps: i32,
    pub terms: Vec<TermJson>,
}

/// Wire layout: `{ "min_power", "trunc_order", "coeffs": [{ "eps", "terms" }] }`.
/// `trunc_order` is `null` for an exact Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsLaurentJson {
    pub min_power: i32,
    pub trunc_order: Option<i32>,
    pub coeffs: Vec<CoeffJson>,
}

impl From<&EpsLaurent> for EpsLaurentJson {
    fn from(a: &EpsLaurent) -> Self {
        let min_power = a
            .min_power()
            .unwrap_or_else(|| a.trunc_order().map_or(0, |t| t.min(0)));
        EpsLaurentJson {
            min_power,
            trunc_order: a.trunc_order(),
            coeffs: a
                .coeffs()
                .map(|(eps, p)| CoeffJson {
                    eps,
                    terms: p
                        .terms()
                        .map(|(m, c)| TermJson {
                            mono: MonoJson {
                                g: m.exp(Var::G) as u32,
                                t: m.exp(Var::T) as u32,
                                q: m.exp(Var::Q) as i32,
                                e: m.exp(Var::E) as i32,
                                tau: m.tau_exps().to_vec(),
                            },
                            num: c.numer().to_string(),
                            den: c.denom().to_string(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<EpsLaurentJson> for EpsLaurent {
    type Error = String;

    fn try_from(j: EpsLaurentJson) -> Result<Self, String> {
        let mut coeffs: BTreeMap<i32, PolyExpr> = BTreeMap::new();
        for c in j.coeffs {
            let poly = coeffs.entry(c.eps).or_default();
            for t in c.terms {
                let num: BigInt = t.num.parse().map_err(|e| format!("numerator: {e}"))?;
                let den: BigInt = t.den.parse().map_err(|e| format!("denominator: {e}"))?;
                if den.sign() != num_bigint::Sign::Plus {
                    return Err("denominator must be positive".into());
                }
                let mut m = Monomial::one()
                    .with_exp(Var::G, t.mono.g.into())
                    .with_exp(Var::T, t.mono.t.into())
                    .with_exp(Var::Q, t.mono.q.into())
                    .with_exp(Var::E, t.mono.e.into());
                for (i, k) in t.mono.tau.iter().enumerate() {
                    m = m.with_exp(Var::Tau(i + 1), (*k).into());
                }
                poly.add_term(m, Q::new(num, den));
            }
        }
        Ok(EpsLaurent::from_coeffs(coeffs, j.trunc_order))
    }
}

impl Serialize for EpsLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EpsLaurentJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for EpsLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = EpsLaurentJson::deserialize(d)?;
        EpsLaurent::try_from(j).map_err(serde::de::Error::custom)
    }
}
