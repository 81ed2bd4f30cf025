use std::cmp::Ordering;
use std::fmt;

use chrono::{DateTime, Datelike, NaiveDate, NaiveTime, Timelike, Utc};
use serde::{Deserialize, Serialize};

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Datatype {
    String,
    Integer,
    Decimal,
    Float,
    Boolean,
    Date,
    DateTime,
}

impl Datatype {
    pub const ALL: [Datatype; 7] = [
        Datatype::String,
        Datatype::Integer,
        Datatype::Decimal,
        Datatype::Float,
        Datatype::Boolean,
        Datatype::Date,
        Datatype::DateTime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Datatype::String => "string",
            Datatype::Integer => "integer",
            Datatype::Decimal => "decimal",
            Datatype::Float => "float",
            Datatype::Boolean => "boolean",
            Datatype::Date => "date",
            Datatype::DateTime => "date-time",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.as_str() == s)
    }

    pub fn xsd_iri(self) -> &'static str {
        match self {
            Datatype::String => "http://www.w3.org/2001/XMLSchema#string",
            Datatype::Integer => "http://www.w3.org/2001/XMLSchema#integer",
            Datatype::Decimal => "http://www.w3.org/2001/XMLSchema#decimal",
            Datatype::Float => "http://www.w3.org/2001/XMLSchema#float",
            Datatype::Boolean => "http://www.w3.org/2001/XMLSchema#boolean",
            Datatype::Date => "http://www.w3.org/2001/XMLSchema#date",
            Datatype::DateTime => "http://www.w3.org/2001/XMLSchema#dateTime",
        }
    }

    pub fn from_xsd_iri(iri: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.xsd_iri() == iri)
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, Datatype::Integer | Datatype::Decimal | Datatype::Float)
    }

    pub fn is_temporal(self) -> bool {
        matches!(self, Datatype::Date | Datatype::DateTime)
    }
}

impl fmt::Display for Datatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A typed value. The lexical form is kept verbatim and must parse as the datatype.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLiteral", into = "RawLiteral")]
pub struct Literal {
    value: String,
    datatype: Datatype,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLiteral {
    value: String,
    datatype: Datatype,
}

impl TryFrom<RawLiteral> for Literal {
    type Error = ModelError;
    fn try_from(raw: RawLiteral) -> Result<Self, Self::Error> {
        Literal::new(raw.value, raw.datatype)
    }
}

impl From<Literal> for RawLiteral {
    fn from(l: Literal) -> Self {
        RawLiteral { value: l.value, datatype: l.datatype }
    }
}

impl Literal {
    pub fn new(value: impl Into<String>, datatype: Datatype) -> Result<Self, ModelError> {
        let value = value.into();
        let ok = match datatype {
            Datatype::String => true,
            Datatype::Integer => value.parse::<i64>().is_ok(),
            Datatype::Decimal | Datatype::Float => value.parse::<f64>().map(f64::is_finite).unwrap_or(false),
            Datatype::Boolean => value == "true" || value == "false",
            Datatype::Date => NaiveDate::parse_from_str(&value, "%Y-%m-%d").is_ok(),
            Datatype::DateTime => DateTime::parse_from_rfc3339(&value).is_ok(),
        };
        if !ok {
            return Err(ModelError::InvalidLiteral { value, datatype });
        }
        Ok(Self { value, datatype })
    }

    pub fn string(value: impl Into<String>) -> Self {
        Self { value: value.into(), datatype: Datatype::String }
    }

    pub fn value(&self) -> &str {
        &self.value
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }

    pub fn as_f64(&self) -> Option<f64> {
        if self.datatype.is_numeric() {
            self.value.parse().ok()
        } else {
            None
        }
    }

    pub fn as_datetime(&self) -> Option<DateTime<Utc>> {
        match self.datatype {
            Datatype::Date => NaiveDate::parse_from_str(&self.value, "%Y-%m-%d")
                .ok()
                .map(|d| d.and_time(NaiveTime::MIN).and_utc()),
            Datatype::DateTime => DateTime::parse_from_rfc3339(&self.value).ok().map(|d| d.with_timezone(&Utc)),
            _ => None,
        }
    }

    pub fn year(&self) -> Option<i32> {
        self.as_datetime().map(|d| d.year())
    }

    /// Orders two literals by value when both are numeric, both temporal or both textual.
    pub fn compare_value(&self, other: &Literal) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (self.as_f64(), other.as_f64()) {
            return a.partial_cmp(&b);
        }
        if let (Some(a), Some(b)) = (self.as_datetime(), other.as_datetime()) {
            return Some(a.cmp(&b));
        }
        if self.datatype == other.datatype {
            return Some(self.value.cmp(&other.value));
        }
        None
    }

    /// Human-readable rendering used in labels.
    pub fn render(&self) -> String {
        match self.as_datetime() {
            Some(d) => {
                let date = format!("{} of {} {}", ordinal(d.day()), d.format("%B"), d.year());
                if self.datatype == Datatype::Date || d.num_seconds_from_midnight() == 0 {
                    date
                } else {
                    format!("{date}, {}", d.format("%H:%M"))
                }
            }
            None => self.value.clone(),
        }
    }
}

fn ordinal(n: u32) -> String {
    let suffix = match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"^^{}", self.value, self.datatype)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_lexical_form() {
        assert!(Literal::new("5", Datatype::Integer).is_ok());
        assert!(Literal::new("5.5", Datatype::Integer).is_err());
        assert!(Literal::new("NaN", Datatype::Float).is_err());
        assert!(Literal::new("maybe", Datatype::Boolean).is_err());
        assert!(Literal::new("2019-08-05", Datatype::Date).is_ok());
        assert!(Literal::new("2019-08-05T00:00:00Z", Datatype::DateTime).is_ok());
        assert!(Literal::new("2019-08-05", Datatype::DateTime).is_err());
    }

    #[test]
    fn renders_dates_as_ordinals() {
        let l = Literal::new("2019-08-05T00:00:00Z", Datatype::DateTime).unwrap();
        assert_eq!(l.render(), "5th of August 2019");
        let l = Literal::new("2021-03-22", Datatype::Date).unwrap();
        assert_eq!(l.render(), "22nd of March 2021");
        let l = Literal::new("2019-08-11T09:30:00Z", Datatype::DateTime).unwrap();
        assert_eq!(l.render(), "11th of August 2019, 09:30");
        assert_eq!(ordinal(1), "1st");
        assert_eq!(ordinal(13), "13th");
        assert_eq!(ordinal(23), "23rd");
    }

    #[test]
    fn compares_across_numeric_types() {
        let a = Literal::new("4.54", Datatype::Decimal).unwrap();
        let b = Literal::new("5", Datatype::Integer).unwrap();
        assert_eq!(a.compare_value(&b), Some(Ordering::Less));
        let s = Literal::string("x");
        assert_eq!(a.compare_value(&s), None);
    }
}
