//! Two-point invariants from the mirror engine, memoized in the cache.

use std::collections::BTreeMap;

use mirror_gw_core::algebra::rational::{decode, encode, Rational};
use mirror_gw_core::mirror::{bps_transform, extract_gw, InvariantKey, MirrorEngine};
use serde::Serialize;

use crate::cache::{Cache, CacheKey};
use crate::config::InsertionPair;
use crate::error::{CliError, CliResult};

pub const SERIES_ID: &str = "two-point-invariants";

/// Every key of degree `d` whose insertions fill the expected dimension.
pub fn dimension_keys(n: usize, a: usize, d: usize) -> Vec<InvariantKey> {
    let dim = n as i64 - 3 + ((n - a) * d) as i64;
    let mut out = Vec::new();
    if dim < 0 {
        return out;
    }
    let dim = dim as usize;
    for a1 in 0..=dim {
        for b1 in 0..n.min(dim - a1 + 1) {
            for b2 in 0..n.min(dim - a1 - b1 + 1) {
                out.push(InvariantKey::new(d, (a1, b1), (dim - a1 - b1 - b2, b2)));
            }
        }
    }
    out.sort();
    out
}

fn key_text(k: &InvariantKey) -> String {
    format!("{},{},{},{},{}", k.d, k.a1, k.b1, k.a2, k.b2)
}

fn parse_key(s: &str) -> Option<InvariantKey> {
    let v: Vec<usize> = s.split(',').map(|x| x.parse().ok()).collect::<Option<_>>()?;
    match v.as_slice() {
        &[d, a1, b1, a2, b2] => Some(InvariantKey::new(d, (a1, b1), (a2, b2))),
        _ => None,
    }
}

/// All dimension-valid invariants of one (n, a) through degree `u_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantStore {
    pub n: usize,
    pub a: usize,
    pub u_order: usize,
    pub values: BTreeMap<InvariantKey, Rational>,
    pub from_cache: bool,
}

/// A single looked-up invariant; `reason` explains a structural zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantRow {
    pub n: usize,
    pub a: usize,
    pub d: usize,
    pub a1: usize,
    pub b1: usize,
    pub a2: usize,
    pub b2: usize,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl InvariantStore {
    pub fn load(n: usize, a: usize, u_order: usize, cache: Option<&Cache>) -> CliResult<Self> {
        let key = CacheKey::new(n, a, SERIES_ID, u_order);
        if let Some(payload) = cache.and_then(|c| c.load(&key)) {
            let values = payload
                .iter()
                .map(|(k, v)| Some((parse_key(k)?, decode(v).ok()?)))
                .collect::<Option<BTreeMap<_, _>>>();
            if let Some(values) = values {
                return Ok(Self {
                    n,
                    a,
                    u_order,
                    values,
                    from_cache: true,
                });
            }
        }
        let store = Self::compute(n, a, u_order)?;
        if let Some(c) = cache {
            let payload = store.values.iter().map(|(k, v)| (key_text(k), encode(v))).collect();
            c.store(&key, payload)?;
        }
        Ok(store)
    }

    pub fn compute(n: usize, a: usize, u_order: usize) -> CliResult<Self> {
        let series = MirrorEngine::build(n, a, u_order)?.two_point()?;
        let mut values = BTreeMap::new();
        for d in 1..=u_order {
            for k in dimension_keys(n, a, d) {
                values.insert(k, extract_gw(&series, &k)?.value);
            }
        }
        Ok(Self {
            n,
            a,
            u_order,
            values,
            from_cache: false,
        })
    }

    pub fn row(&self, key: &InvariantKey) -> CliResult<InvariantRow> {
        key.validate(self.n)?;
        if key.d > self.u_order {
            return Err(CliError::Config(format!("degree {} exceeds u-order {}", key.d, self.u_order)));
        }
        let (value, reason) = match self.values.get(key) {
            Some(v) => (encode(v), None),
            None => ("0/1".to_string(), Some("dimension".to_string())),
        };
        Ok(InvariantRow {
            n: self.n,
            a: self.a,
            d: key.d,
            a1: key.a1,
            b1: key.b1,
            a2: key.a2,
            b2: key.b2,
            value,
            reason,
        })
    }

    /// GW and BPS numbers for one insertion pair in degrees 1..=d_max.
    pub fn bps(&self, pair: [InsertionPair; 2], d_max: usize) -> CliResult<Vec<BpsRow>> {
        let gw: BTreeMap<usize, Rational> = (1..=d_max)
            .map(|d| {
                let key = InvariantKey::new(d, pair[0], pair[1]);
                key.validate(self.n)?;
                Ok((d, self.values.get(&key).cloned().unwrap_or_default()))
            })
            .collect::<CliResult<_>>()?;
        let bps = bps_transform(&gw, d_max)?;
        Ok(gw
            .iter()
            .map(|(&d, g)| BpsRow {
                d,
                gw: encode(g),
                bps: integer_or_ratio(&bps[&d]),
                integral: bps[&d].is_integer(),
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BpsRow {
    pub d: usize,
    pub gw: String,
    /// A plain integer when integral, `num/den` otherwise.
    pub bps: String,
    pub integral: bool,
}

pub fn integer_or_ratio(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        encode(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_fill_the_dimension() {
        for (n, a, d) in [(5, 5, 1), (4, 3, 2), (7, 7, 3)] {
            let keys = dimension_keys(n, a, d);
            assert!(!keys.is_empty());
            for k in &keys {
                assert_eq!(k.dimension(), k.expected_dimension(n, a));
                assert!(k.b1 < n && k.b2 < n);
            }
        }
        assert!(dimension_keys(2, 2, 1).is_empty());
    }

    #[test]
    fn quintic_lines() {
        let store = InvariantStore::compute(5, 5, 2).unwrap();
        let rows = store.bps([(0, 1), (0, 1)], 2).unwrap();
        assert_eq!(rows[0].gw, "2875/1");
        assert_eq!(rows[1].bps, "2437000"); // 4·609250
        let zero = store.row(&InvariantKey::new(1, (0, 0), (0, 1))).unwrap();
        assert_eq!((zero.value.as_str(), zero.reason.as_deref()), ("0/1", Some("dimension")));
    }

    #[test]
    fn cache_round_trip_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let cold = InvariantStore::load(4, 3, 2, Some(&cache)).unwrap();
        let warm = InvariantStore::load(4, 3, 2, Some(&cache)).unwrap();
        assert!(!cold.from_cache && warm.from_cache);
        assert_eq!(cold.values, warm.values);
    }
}
