use std::fmt;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::ModelError;

/// A UTC instant with nanosecond precision, always rendered as RFC 3339 with nine
/// fractional digits so that text ordering equals time ordering.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Timestamp(DateTime<Utc>);

impl Timestamp {
    pub fn new(at: DateTime<Utc>) -> Self {
        Self(at)
    }

    pub fn now() -> Self {
        Self(Utc::now())
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        DateTime::parse_from_rfc3339(text)
            .map(|d| Self(d.with_timezone(&Utc)))
            .map_err(|e| ModelError::InvalidTimestamp { value: text.to_string(), reason: e.to_string() })
    }

    pub fn as_datetime(&self) -> DateTime<Utc> {
        self.0
    }

    pub fn succ(&self) -> Self {
        Self(self.0 + chrono::Duration::nanoseconds(1))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_rfc3339_opts(SecondsFormat::Nanos, true))
    }
}

impl fmt::Debug for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl TryFrom<String> for Timestamp {
    type Error = ModelError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Self::parse(&value)
    }
}

impl From<Timestamp> for String {
    fn from(value: Timestamp) -> Self {
        value.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_keeps_nanos() {
        let t = Timestamp::parse("2019-08-05T10:00:00.123456789Z").unwrap();
        assert_eq!(t.to_string(), "2019-08-05T10:00:00.123456789Z");
        assert_eq!(Timestamp::parse(&t.to_string()).unwrap(), t);
        assert!(t.succ() > t);
    }
}
