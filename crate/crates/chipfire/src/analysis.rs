//! Firing-sequence predicates, activity, complement games, abundance, and
//! compliance classification.

use num_rational::Ratio;
use thiserror::Error;

use crate::engine::{ChipConfig, CycleSummary};
use crate::graph::Graph;

/// Exact rational activity value. Never a float: the middle-stair claim is
/// an exact 1/2.
pub type Activity = Ratio<u64>;

/// Renders an exact rational as `p/q`, or just `p` when the denominator
/// reduces to 1.
pub fn format_ratio(r: &Activity) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("vertex {v} out of range (n = {n})")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("complement undefined: vertex {v} is abundant ({chips} >= 2*deg = {bound})")]
    ComplementUndefined { v: usize, chips: u64, bound: u64 },
}

/// One vertex's fire/wait word over a cycle, interpreted cyclically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiringSequence {
    word: Vec<bool>,
}

impl FiringSequence {
    pub fn word(&self) -> &[bool] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

impl std::fmt::Display for FiringSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.word {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for FiringSequence {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let word = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("bad firing symbol {:?}", other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiringSequence { word })
    }
}

/// The word `F_0(v) .. F_{T-1}(v)` for one vertex.
pub fn firing_sequence(s: &CycleSummary, v: usize) -> Result<FiringSequence, AnalysisError> {
    if v >= s.n() {
        return Err(AnalysisError::VertexOutOfRange { v, n: s.n() });
    }
    Ok(FiringSequence {
        word: (0..s.period()).map(|t| s.fires_at(t, v)).collect(),
    })
}

/// A cyclic word is clumpy if it contains both "00" and "11" as length-2
/// factors, wrap-around pairs included.
pub fn is_clumpy(w: &FiringSequence) -> bool {
    let t = w.word.len();
    let mut has00 = false;
    let mut has11 = false;
    for i in 0..t {
        let (a, b) = (w.word[i], w.word[(i + 1) % t]);
        if a && b {
            has11 = true;
        }
        if !a && !b {
            has00 = true;
        }
    }
    has00 && has11
}

/// Dense: between any two consecutive firings of `v` in the periodic
/// extension (exclusive of the first, inclusive of the second, wrap-around
/// pair included), every neighbor of `v` fires. Checking consecutive pairs
/// is equivalent to the all-pairs condition: any wider pair contains a chain
/// of consecutive sub-pairs. Vacuously true if `v` never fires.
pub fn is_dense(s: &CycleSummary, g: &Graph, v: usize) -> Result<bool, AnalysisError> {
    if v >= s.n() {
        return Err(AnalysisError::VertexOutOfRange { v, n: s.n() });
    }
    let t_count = s.period();
    let rounds = s.firing_rounds(v);
    if rounds.is_empty() {
        return Ok(true);
    }
    for &u in g.neighbors(v) {
        let u_rounds = s.firing_rounds(u);
        if u_rounds.is_empty() {
            return Ok(false);
        }
        // extend u's rounds one period forward to cover the wrap pair
        let extended: Vec<usize> = u_rounds
            .iter()
            .copied()
            .chain(u_rounds.iter().map(|&r| r + t_count))
            .collect();
        for (i, &a) in rounds.iter().enumerate() {
            let b = if i + 1 < rounds.len() {
                rounds[i + 1]
            } else {
                rounds[0] + t_count
            };
            if !extended.iter().any(|&t| a < t && t <= b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Long-run fraction of (vertex, round) pairs that fire, exact on the cycle.
pub fn activity(s: &CycleSummary) -> Activity {
    let fired: u64 = (0..s.n()).map(|v| s.firings_of(v)).sum();
    Ratio::new(fired, (s.period() * s.n()) as u64)
}

/// The complement configuration `sigma_c(v) = 2 deg(v) - 1 - sigma(v)`.
/// Undefined when some vertex is abundant.
pub fn complement(g: &Graph, sigma: &ChipConfig) -> Result<ChipConfig, AnalysisError> {
    let mut out = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let bound = 2 * g.degree(v) as u64;
        if sigma[v] >= bound {
            return Err(AnalysisError::ComplementUndefined {
                v,
                chips: sigma[v],
                bound,
            });
        }
        out.push(bound - 1 - sigma[v]);
    }
    Ok(ChipConfig::new(out))
}

/// Vertices with at least `2 deg(v)` chips.
pub fn abundant_vertices(g: &Graph, sigma: &ChipConfig) -> Vec<usize> {
    (0..g.n())
        .filter(|&v| sigma[v] >= 2 * g.degree(v) as u64)
        .collect()
}

/// Compliant: period at least 3, no vertex fires twice in a row, and every
/// firing sequence is dense.
pub fn is_compliant(s: &CycleSummary, g: &Graph) -> bool {
    if s.period() < 3 {
        return false;
    }
    let t_count = s.period();
    for v in 0..s.n() {
        for t in 0..t_count {
            if s.fires_at(t, v) && s.fires_at((t + 1) % t_count, v) {
                return false;
            }
        }
        if !is_dense(s, g, v).expect("vertex in range") {
            return false;
        }
    }
    true
}
