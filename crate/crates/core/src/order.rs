//! Extended-real Rényi orders and the induced risk parameter `R = 1/α`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sign function with the convention `sgn(0) = +1`.
#[inline]
pub fn sgn(w: f64) -> f64 {
    if w >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Regime of an order on the extended real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderClass {
    NegInf,
    Negative,
    Zero,
    ZeroOne,
    One,
    GtOne,
    PosInf,
}

/// A Rényi order `α ∈ ℝ ∪ {+∞, −∞}`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub const INF: Order = Order(f64::INFINITY);
    pub const NEG_INF: Order = Order(f64::NEG_INFINITY);
    pub const ZERO: Order = Order(0.0);
    pub const ONE: Order = Order(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() {
            return Err(Error::InvalidOrder("NaN".into()));
        }
        Ok(Order(alpha))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn classify(self) -> OrderClass {
        let a = self.0;
        if a == f64::NEG_INFINITY {
            OrderClass::NegInf
        } else if a == f64::INFINITY {
            OrderClass::PosInf
        } else if a == 0.0 {
            OrderClass::Zero
        } else if a == 1.0 {
            OrderClass::One
        } else if a < 0.0 {
            OrderClass::Negative
        } else if a < 1.0 {
            OrderClass::ZeroOne
        } else {
            OrderClass::GtOne
        }
    }

    /// `sgn(α)`, with `sgn(0) = +1`.
    #[inline]
    pub fn sgn(self) -> f64 {
        sgn(self.0)
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Risk `R = 1/α`. The infinite orders map to signed zeros; `α = 0` is rejected.
    pub fn risk(self) -> Result<RiskParam> {
        if self.0 == 0.0 {
            return Err(Error::InvalidOrder(
                "alpha = 0 corresponds to unbounded risk".into(),
            ));
        }
        Ok(RiskParam(1.0 / self.0))
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt_ext(self.0, f)
    }
}

impl std::str::FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Order::new(parse_ext(s).ok_or_else(|| Error::InvalidOrder(s.to_string()))?)
    }
}

/// Risk parameter `R`. A signed zero records whether it came from `α = +∞` or `α = −∞`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RiskParam(f64);

impl RiskParam {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_nan() {
            return Err(Error::InvalidRisk("NaN".into()));
        }
        Ok(RiskParam(r))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Sign of `R` read from the sign bit, so `-0.0` is negative.
    #[inline]
    pub fn sign(self) -> f64 {
        if self.0.is_sign_negative() {
            -1.0
        } else {
            1.0
        }
    }

    /// `α = 1/R`; `±0` maps to `±∞` and `±∞` maps to zero.
    pub fn order(self) -> Order {
        Order(1.0 / self.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }
}

impl std::fmt::Display for RiskParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt_ext(self.0, f)
    }
}

impl std::str::FromStr for RiskParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RiskParam::new(parse_ext(s).ok_or_else(|| Error::InvalidRisk(s.to_string()))?)
    }
}

fn fmt_ext(v: f64, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
    if v == f64::INFINITY {
        write!(f, "inf")
    } else if v == f64::NEG_INFINITY {
        write!(f, "-inf")
    } else {
        write!(f, "{v}")
    }
}

/// Parses a number or one of `inf`, `+inf`, `-inf`.
pub fn parse_ext(s: &str) -> Option<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        other => other.parse::<f64>().ok().filter(|v| !v.is_nan()),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtRepr {
    Num(f64),
    Text(String),
}

fn ser_ext<S: Serializer>(v: f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v == f64::INFINITY {
        s.serialize_str("inf")
    } else if v == f64::NEG_INFINITY {
        s.serialize_str("-inf")
    } else {
        s.serialize_f64(v)
    }
}

fn de_ext<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    match ExtRepr::deserialize(d)? {
        ExtRepr::Num(v) => Ok(v),
        ExtRepr::Text(t) => {
            parse_ext(&t).ok_or_else(|| serde::de::Error::custom(format!("bad extended real {t}")))
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_ext(self.0, s)
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Order(de_ext(d)?))
    }
}

impl Serialize for RiskParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_ext(self.0, s)
    }
}

impl<'de> Deserialize<'de> for RiskParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(RiskParam(de_ext(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sgn_convention() {
        assert_eq!(sgn(0.0), 1.0);
        assert_eq!(sgn(-3.2), -1.0);
        assert_eq!(sgn(f64::INFINITY), 1.0);
    }

    #[test]
    fn classify_is_exact_at_boundaries() {
        assert_eq!(Order::new(0.0).unwrap().classify(), OrderClass::Zero);
        assert_eq!(Order::new(1.0).unwrap().classify(), OrderClass::One);
        assert_eq!(Order::new(1.0 + 1e-15).unwrap().classify(), OrderClass::GtOne);
        assert_eq!(Order::new(-1e-300).unwrap().classify(), OrderClass::Negative);
        assert_eq!(Order::new(0.5).unwrap().classify(), OrderClass::ZeroOne);
        assert_eq!(Order::INF.classify(), OrderClass::PosInf);
        assert_eq!(Order::NEG_INF.classify(), OrderClass::NegInf);
    }

    #[test]
    fn risk_branches() {
        let r = Order::INF.risk().unwrap();
        assert!(r.is_zero() && r.sign() > 0.0);
        let r = Order::NEG_INF.risk().unwrap();
        assert!(r.is_zero() && r.sign() < 0.0);
        assert!(Order::ZERO.risk().is_err());
        for a in [-3.0, -0.5, 0.25, 2.0, 7.0] {
            let back = Order::new(a).unwrap().risk().unwrap().order().value();
            assert!((back - a).abs() <= 1e-12);
        }
    }

    #[test]
    fn serde_round_trip() {
        for a in [Order::INF, Order::NEG_INF, Order::new(2.5).unwrap()] {
            let s = serde_json::to_string(&a).unwrap();
            let back: Order = serde_json::from_str(&s).unwrap();
            assert_eq!(back, a);
        }
        let o: Order = serde_json::from_str("\"-inf\"").unwrap();
        assert_eq!(o, Order::NEG_INF);
        assert_eq!("inf".parse::<Order>().unwrap(), Order::INF);
    }
}
