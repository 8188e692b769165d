//! Serde adapters writing 64-bit values as decimal strings, so JSON readers
//! limited to 53-bit integers do not lose precision.

pub(crate) mod decimal {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod decimal_prime {
    use serde::{Deserializer, Serializer};

    use crate::ff_linalg::PrimeModulus;

    pub fn serialize<S: Serializer>(p: &PrimeModulus, s: S) -> Result<S::Ok, S::Error> {
        super::decimal::serialize(&p.value(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PrimeModulus, D::Error> {
        let v = super::decimal::deserialize(d)?;
        PrimeModulus::new(v).map_err(serde::de::Error::custom)
    }
}
