//! Shared JSON encoding of matrices and coefficient vectors.
//!
//! A matrix is `{"rows", "cols", "field", "p"?, "entries"}` with row-major
//! entries. Rationals are `"num/den"` strings, complex values `[re, im]`
//! pairs and GF(p) values plain integers, with the prime in `"p"`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::scalar::{format_rational, is_prime, parse_rational, Fp, Rational, MAX_PRIME};
use crate::statemat::StateMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Complex,
    Gfp,
}

impl FieldKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldKind::Rational => "rational",
            FieldKind::Complex => "complex",
            FieldKind::Gfp => "gfp",
        }
    }
}

/// Scalars that know their JSON representation.
pub trait FieldScalar: Clone + Sized {
    const FIELD: FieldKind;

    fn modulus(&self) -> Option<u64> {
        None
    }

    fn encode(&self) -> Value;

    fn decode(v: &Value, p: Option<u64>) -> Result<Self, String>;
}

impl FieldScalar for Rational {
    const FIELD: FieldKind = FieldKind::Rational;

    fn encode(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn decode(v: &Value, _: Option<u64>) -> Result<Self, String> {
        match v {
            Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
            Value::Number(n) if n.is_i64() => Ok(crate::scalar::int(n.as_i64().unwrap())),
            other => Err(format!("expected rational string \"num/den\", got {other}")),
        }
    }
}

impl FieldScalar for Complex64 {
    const FIELD: FieldKind = FieldKind::Complex;

    fn encode(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }

    fn decode(v: &Value, _: Option<u64>) -> Result<Self, String> {
        match v.as_array().map(|a| a.as_slice()) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                _ => Err(format!("complex parts must be numbers, got {v}")),
            },
            _ => Err(format!("expected complex pair [re, im], got {v}")),
        }
    }
}

impl FieldScalar for Fp {
    const FIELD: FieldKind = FieldKind::Gfp;

    fn modulus(&self) -> Option<u64> {
        Some(Fp::modulus(*self))
    }

    fn encode(&self) -> Value {
        Value::from(self.value())
    }

    fn decode(v: &Value, p: Option<u64>) -> Result<Self, String> {
        let p = p.ok_or("gfp matrix is missing the prime \"p\"")?;
        let x = v.as_u64().ok_or_else(|| format!("expected GF(p) integer, got {v}"))?;
        if x >= p {
            return Err(format!("GF({p}) value {x} not reduced"));
        }
        Ok(Fp::from_u64(x, p))
    }
}

fn check_prime(p: Option<u64>) -> Result<(), String> {
    match p {
        Some(p) if !is_prime(p) || p >= MAX_PRIME => Err(format!("p must be a prime below {MAX_PRIME}, got {p}")),
        _ => Ok(()),
    }
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    field: FieldKind,
    #[serde(default)]
    p: Option<u64>,
    entries: Vec<Value>,
}

impl RawMatrix {
    fn decode<T: FieldScalar>(&self) -> Result<StateMatrix<T>, String> {
        if self.field != T::FIELD {
            return Err(format!("expected field {:?}, found {:?}", T::FIELD.as_str(), self.field.as_str()));
        }
        check_prime(self.p)?;
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, v)| T::decode(v, self.p).map_err(|e| format!("entry {k}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        StateMatrix::new(self.rows, self.cols, entries).map_err(|e| e.to_string())
    }
}

impl<T: FieldScalar> Serialize for StateMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let p = self.entries()[0].modulus();
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("rows", &self.rows())?;
        map.serialize_entry("cols", &self.cols())?;
        map.serialize_entry("field", &T::FIELD)?;
        if let Some(p) = p {
            map.serialize_entry("p", &p)?;
        }
        let entries: Vec<Value> = self.entries().iter().map(FieldScalar::encode).collect();
        map.serialize_entry("entries", &entries)?;
        map.end()
    }
}

impl<'de, T: FieldScalar> Deserialize<'de> for StateMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        RawMatrix::deserialize(deserializer)?.decode().map_err(D::Error::custom)
    }
}

/// A matrix over whichever field its JSON declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Rational(StateMatrix<Rational>),
    Complex(StateMatrix<Complex64>),
    Gfp(StateMatrix<Fp>),
}

impl Serialize for AnyMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            AnyMatrix::Rational(m) => m.serialize(serializer),
            AnyMatrix::Complex(m) => m.serialize(serializer),
            AnyMatrix::Gfp(m) => m.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for AnyMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawMatrix::deserialize(deserializer)?;
        match raw.field {
            FieldKind::Rational => raw.decode().map(AnyMatrix::Rational),
            FieldKind::Complex => raw.decode().map(AnyMatrix::Complex),
            FieldKind::Gfp => raw.decode().map(AnyMatrix::Gfp),
        }
        .map_err(D::Error::custom)
    }
}

/// Coefficient vector tagged with its field: `{"field", "p"?, "entries"}`.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyVector {
    Rational(Vec<Rational>),
    Complex(Vec<Complex64>),
    Gfp { p: u64, values: Vec<u64> },
}

impl AnyVector {
    pub fn len(&self) -> usize {
        match self {
            AnyVector::Rational(v) => v.len(),
            AnyVector::Complex(v) => v.len(),
            AnyVector::Gfp { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Serialize for AnyVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (field, p, entries): (FieldKind, Option<u64>, Vec<Value>) = match self {
            AnyVector::Rational(v) => (FieldKind::Rational, None, v.iter().map(FieldScalar::encode).collect()),
            AnyVector::Complex(v) => (FieldKind::Complex, None, v.iter().map(FieldScalar::encode).collect()),
            AnyVector::Gfp { p, values } => (FieldKind::Gfp, Some(*p), values.iter().map(|&x| Value::from(x)).collect()),
        };
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("field", &field)?;
        if let Some(p) = p {
            map.serialize_entry("p", &p)?;
        }
        map.serialize_entry("entries", &entries)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for AnyVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            field: FieldKind,
            #[serde(default)]
            p: Option<u64>,
            entries: Vec<Value>,
        }
        let raw = Raw::deserialize(deserializer)?;
        check_prime(raw.p).map_err(D::Error::custom)?;
        fn all<T: FieldScalar>(raw: &Raw) -> Result<Vec<T>, String> {
            raw.entries.iter().map(|v| T::decode(v, raw.p)).collect()
        }
        match raw.field {
            FieldKind::Rational => all(&raw).map(AnyVector::Rational),
            FieldKind::Complex => all(&raw).map(AnyVector::Complex),
            FieldKind::Gfp => all::<Fp>(&raw).map(|v| AnyVector::Gfp {
                p: raw.p.unwrap_or_default(),
                values: v.into_iter().map(Fp::value).collect(),
            }),
        }
        .map_err(D::Error::custom)
    }
}

/// Serde adapter for optional rationals as `"num/den"` strings.
pub mod opt_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(D::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    #[test]
    fn rational_matrix_encoding() {
        let m = StateMatrix::new(1, 2, vec![rational(1, 2), int(-3)]).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"rows":1,"cols":2,"field":"rational","entries":["1/2","-3/1"]}"#);
        let back: StateMatrix<Rational> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn complex_and_gfp_encoding() {
        let m = StateMatrix::new(1, 1, vec![Complex64::new(1.5, -2.0)]).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"rows":1,"cols":1,"field":"complex","entries":[[1.5,-2.0]]}"#);
        let g = StateMatrix::new(1, 2, vec![Fp::new(4, 5), Fp::new(-1, 5)]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"rows":1,"cols":2,"field":"gfp","p":5,"entries":[4,4]}"#);
        match serde_json::from_str::<AnyMatrix>(&text).unwrap() {
            AnyMatrix::Gfp(back) => assert_eq!(back, g),
            other => panic!("wrong field {other:?}"),
        }
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        let short = r#"{"rows":2,"cols":2,"field":"rational","entries":["1/1"]}"#;
        assert!(serde_json::from_str::<StateMatrix<Rational>>(short).is_err());
        let wrong_field = r#"{"rows":1,"cols":1,"field":"complex","entries":[[0,0]]}"#;
        assert!(serde_json::from_str::<StateMatrix<Rational>>(wrong_field).is_err());
        let composite = r#"{"rows":1,"cols":1,"field":"gfp","p":4,"entries":[1]}"#;
        assert!(serde_json::from_str::<AnyMatrix>(composite).is_err());
        let unreduced = r#"{"rows":1,"cols":1,"field":"gfp","p":3,"entries":[3]}"#;
        assert!(serde_json::from_str::<AnyMatrix>(unreduced).is_err());
    }

    #[test]
    fn vectors_round_trip() {
        for v in [
            AnyVector::Rational(vec![rational(2, 3), int(0)]),
            AnyVector::Complex(vec![Complex64::new(0.25, 1.0)]),
            AnyVector::Gfp { p: 3, values: vec![1, 2, 0] },
        ] {
            let text = serde_json::to_string(&v).unwrap();
            assert_eq!(serde_json::from_str::<AnyVector>(&text).unwrap(), v);
        }
    }
}
