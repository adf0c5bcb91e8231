//! Published BPS values used to flag mismatches in `table`.

use crate::config::InsertionPair;

/// Degree-7 hypersurface in ℙ⁶, two codimension-2 insertions, d = 1..=10.
const SEPTIC_H2_H2: [&str; 10] = [
    "1707797",
    "510787745643",
    "222548537108926490",
    "113635631482486991647224",
    "63340724462384110502639024265",
    "37325795060717360046547665187418254",
    "22857028298936684292245509537579343818647",
    "14395953469762596243721601709186933042635134584",
    "9263611884884554518268724722981763557936573405648178",
    "6062677702410680024315392235188823274104219383883410807999",
];

/// Known BPS numbers for (n, a, insertions), indexed by d − 1.
pub fn known_bps(n: usize, a: usize, pair: [InsertionPair; 2]) -> Option<&'static [&'static str]> {
    (n == 7 && a == 7 && pair == [(0, 2), (0, 2)]).then_some(&SEPTIC_H2_H2[..])
}
