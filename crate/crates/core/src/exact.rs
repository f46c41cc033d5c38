//! Serde helpers writing rationals as `{"num": n, "den": d}`.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct Repr {
    num: i64,
    den: i64,
}

pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
    Repr { num: *r.numer(), den: *r.denom() }.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
    let r = Repr::deserialize(d)?;
    if r.den == 0 {
        return Err(serde::de::Error::custom("zero denominator"));
    }
    Ok(Ratio::new(r.num, r.den))
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Ratio<i64>>, s: S) -> Result<S::Ok, S::Error> {
        r.map(|r| Repr { num: *r.numer(), den: *r.denom() }).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ratio<i64>>, D::Error> {
        Ok(Option::<Repr>::deserialize(d)?.map(|r| Ratio::new(r.num, r.den.max(1))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "crate::exact")]
        value: Ratio<i64>,
    }

    #[test]
    fn round_trip() {
        let h = Holder { value: Ratio::new(6, 4) };
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, r#"{"value":{"num":3,"den":2}}"#);
        assert_eq!(serde_json::from_str::<Holder>(&text).unwrap(), h);
    }
}
