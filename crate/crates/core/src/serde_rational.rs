//! Rationals serialize as reduced `"p/q"` strings (`"p"` when integral).

use num_rational::Rational64;
use serde::Serializer;

pub fn to_string(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_string(r))
}

pub fn serialize_map<S, K>(map: &std::collections::BTreeMap<K, Rational64>, s: S) -> Result<S::Ok, S::Error>
where
    S: Serializer,
    K: serde::Serialize,
{
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(map.len()))?;
    for (k, v) in map {
        m.serialize_entry(k, &to_string(v))?;
    }
    m.end()
}

pub fn serialize_opt_map<S, K>(map: &Option<std::collections::BTreeMap<K, Rational64>>, s: S) -> Result<S::Ok, S::Error>
where
    S: Serializer,
    K: serde::Serialize,
{
    match map {
        Some(m) => serialize_map(m, s),
        None => s.serialize_none(),
    }
}
