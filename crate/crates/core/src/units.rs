use serde::{Deserialize, Serialize};

/// Unit for information quantities. Library functions return bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfoUnit {
    #[default]
    Bits,
    Nats,
}

impl InfoUnit {
    /// Converts a value in bits to this unit.
    pub fn from_bits(self, bits: f64) -> f64 {
        match self {
            InfoUnit::Bits => bits,
            InfoUnit::Nats => bits * std::f64::consts::LN_2,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            InfoUnit::Bits => "bits",
            InfoUnit::Nats => "nats",
        }
    }
}
