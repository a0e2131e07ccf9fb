use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Declared type of a property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueType {
    Text,
    Int,
    Long,
    Real,
}

impl ValueType {
    pub fn is_numeric(self) -> bool {
        !matches!(self, ValueType::Text)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ValueType::Text => "text",
            ValueType::Int => "int",
            ValueType::Long => "long",
            ValueType::Real => "real",
        }
    }

    /// Parses `raw` as a value of this type. The empty string is `Null`.
    pub fn parse_value(self, raw: &str) -> std::result::Result<AttributeValue, String> {
        if raw.is_empty() {
            return Ok(AttributeValue::Null);
        }
        match self {
            ValueType::Text => Ok(AttributeValue::Text(raw.to_owned())),
            ValueType::Int => raw
                .parse()
                .map(AttributeValue::Int)
                .map_err(|e| format!("invalid int `{raw}`: {e}")),
            ValueType::Long => raw
                .parse()
                .map(AttributeValue::Long)
                .map_err(|e| format!("invalid long `{raw}`: {e}")),
            ValueType::Real => {
                let v: f64 = raw.parse().map_err(|e| format!("invalid real `{raw}`: {e}"))?;
                AttributeValue::real(v).map_err(|e| e.to_string())
            }
        }
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ValueType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "text" => Ok(ValueType::Text),
            "int" => Ok(ValueType::Int),
            "long" => Ok(ValueType::Long),
            "real" => Ok(ValueType::Real),
            other => Err(other.to_owned()),
        }
    }
}

/// A single cell of an information table.
///
/// `Null` is a value in its own right: an attribute that is advertised but
/// whose value is unknown. In equivalence tests `Null` only agrees with `Null`.
#[derive(Debug, Clone, PartialEq)]
pub enum AttributeValue {
    Text(String),
    Int(i32),
    Long(i64),
    Real(f64),
    Null,
}

impl AttributeValue {
    pub fn real(v: f64) -> Result<Self> {
        if v.is_finite() {
            // -0.0 and 0.0 must land in the same equivalence class
            Ok(AttributeValue::Real(if v == 0.0 { 0.0 } else { v }))
        } else {
            Err(Error::NonFiniteReal(v))
        }
    }

    pub fn text(s: impl Into<String>) -> Self {
        AttributeValue::Text(s.into())
    }

    pub fn is_null(&self) -> bool {
        matches!(self, AttributeValue::Null)
    }

    /// `None` for `Null`.
    pub fn value_type(&self) -> Option<ValueType> {
        match self {
            AttributeValue::Text(_) => Some(ValueType::Text),
            AttributeValue::Int(_) => Some(ValueType::Int),
            AttributeValue::Long(_) => Some(ValueType::Long),
            AttributeValue::Real(_) => Some(ValueType::Real),
            AttributeValue::Null => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            AttributeValue::Int(v) => Some(f64::from(v)),
            AttributeValue::Long(v) => Some(v as f64),
            AttributeValue::Real(v) => Some(v),
            _ => None,
        }
    }

    pub(crate) fn type_name(&self) -> &'static str {
        self.value_type().map_or("null", ValueType::as_str)
    }

    pub(crate) fn key(&self) -> ValueKey<'_> {
        match self {
            AttributeValue::Text(s) => ValueKey::Text(s),
            AttributeValue::Int(v) => ValueKey::Int(*v),
            AttributeValue::Long(v) => ValueKey::Long(*v),
            AttributeValue::Real(v) => ValueKey::Real(v.to_bits()),
            AttributeValue::Null => ValueKey::Null,
        }
    }
}

/// Hashable view of a value; reals compare by bit pattern (they are finite and
/// zero-normalised on construction).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum ValueKey<'a> {
    Text(&'a str),
    Int(i32),
    Long(i64),
    Real(u64),
    Null,
}

impl fmt::Display for AttributeValue {
    /// Canonical text form; `Null` renders as the empty string and reals use the
    /// shortest representation that parses back to the same bits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeValue::Text(s) => f.write_str(s),
            AttributeValue::Int(v) => write!(f, "{v}"),
            AttributeValue::Long(v) => write!(f, "{v}"),
            AttributeValue::Real(v) => write!(f, "{v}"),
            AttributeValue::Null => Ok(()),
        }
    }
}
