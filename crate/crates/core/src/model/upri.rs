use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Globally unique, persistent identifier of a resource, unit, version or schema element.
///
/// UPRIs are opaque text. Engine-minted values take the form `urn:kgbb:<uuid>`;
/// spec files may use any IRI or CURIE-like string without whitespace.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Upri(String);

impl Upri {
    pub fn new(value: impl Into<String>) -> Result<Self, ModelError> {
        let value = value.into();
        if value.is_empty() {
            return Err(ModelError::InvalidUpri { value, reason: "empty" });
        }
        if value.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(ModelError::InvalidUpri { value, reason: "contains whitespace or control characters" });
        }
        Ok(Self(value))
    }

    /// Builds a UPRI from a literal known to be valid. Panics otherwise.
    pub fn from_static(value: &'static str) -> Self {
        Self::new(value).expect("static UPRI must be valid")
    }

    pub fn from_uuid(id: uuid::Uuid) -> Self {
        Self(format!("urn:kgbb:{id}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Everything up to and including the last `#`, `/` or `:`.
    pub fn namespace(&self) -> &str {
        match self.0.rfind(['#', '/', ':']) {
            Some(i) => &self.0[..=i],
            None => "",
        }
    }

    /// The part after [`Upri::namespace`].
    pub fn local_name(&self) -> &str {
        &self.0[self.namespace().len()..]
    }
}

impl TryFrom<String> for Upri {
    type Error = ModelError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<Upri> for String {
    fn from(value: Upri) -> Self {
        value.0
    }
}

impl FromStr for Upri {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

impl AsRef<str> for Upri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Upri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Upri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}
