//! Extended nonnegative reals.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ext {
    Finite(f64),
    Infinite,
}

impl Ext {
    pub fn finite(self) -> Option<f64> {
        match self {
            Ext::Finite(x) => Some(x),
            Ext::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Ext::Infinite)
    }

    /// Finite value, panicking on +∞. For contexts where finiteness is proven.
    pub fn unwrap(self) -> f64 {
        self.finite().expect("value is +inf")
    }

    /// self − other, with +∞ − finite = +∞ and anything − +∞ = −∞ marker None.
    pub fn minus(self, other: Ext) -> Option<Ext> {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Some(Ext::Finite(a - b)),
            (Ext::Infinite, Ext::Finite(_)) => Some(Ext::Infinite),
            _ => None,
        }
    }

    /// Total order with +∞ above every finite value.
    pub fn ge(self, other: Ext) -> bool {
        match (self, other) {
            (Ext::Infinite, _) => true,
            (Ext::Finite(_), Ext::Infinite) => false,
            (Ext::Finite(a), Ext::Finite(b)) => a >= b,
        }
    }
}

impl From<f64> for Ext {
    fn from(x: f64) -> Self {
        if x == f64::INFINITY {
            Ext::Infinite
        } else {
            Ext::Finite(x)
        }
    }
}

impl std::fmt::Display for Ext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ext::Finite(x) => write!(f, "{x:.17e}"),
            Ext::Infinite => write!(f, "+inf"),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ext::Finite(x) if x.is_finite() => s.serialize_f64(*x),
            Ext::Finite(_) => s.serialize_str("nan"),
            Ext::Infinite => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Ext::Finite(x)),
            Raw::Text(t) if t == "+inf" => Ok(Ext::Infinite),
            Raw::Text(t) if t == "nan" => Ok(Ext::Finite(f64::NAN)),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad extended real {t:?}"))),
        }
    }
}
