use serde::{Deserialize, Serialize};

use super::{exact, Graph};
use crate::error::{Error, Result};

/// Column-stochastic `outputs x inputs` matrix `p(y|x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalChannel {
    inputs: usize,
    outputs: usize,
    /// `probs[y][x]`
    probs: Vec<Vec<f64>>,
}

impl ClassicalChannel {
    pub fn new(inputs: usize, outputs: usize, probs: Vec<Vec<f64>>) -> Result<Self> {
        if probs.len() != outputs || probs.iter().any(|r| r.len() != inputs) {
            return Err(Error::InvalidClassicalChannel(format!(
                "expected {outputs} rows of length {inputs}"
            )));
        }
        for row in &probs {
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::InvalidClassicalChannel(
                    "entries must be finite and non-negative".into(),
                ));
            }
        }
        for x in 0..inputs {
            let s: f64 = probs.iter().map(|r| r[x]).sum();
            if (s - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidClassicalChannel(format!(
                    "column {x} sums to {s}"
                )));
            }
        }
        Ok(Self {
            inputs,
            outputs,
            probs,
        })
    }

    /// `p(y|x) = [x == y]` on `n` symbols.
    pub fn identity(n: usize) -> Self {
        let probs = (0..n)
            .map(|y| (0..n).map(|x| if x == y { 1.0 } else { 0.0 }).collect())
            .collect();
        Self {
            inputs: n,
            outputs: n,
            probs,
        }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.probs[y][x]
    }

    pub fn probs(&self) -> &[Vec<f64>] {
        &self.probs
    }
}

/// Wire format: `{"inputs": n, "outputs": k, "probs": [[...], ...]}`, one row per output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalChannelJson {
    pub inputs: usize,
    pub outputs: usize,
    pub probs: Vec<Vec<f64>>,
}

impl From<&ClassicalChannel> for ClassicalChannelJson {
    fn from(c: &ClassicalChannel) -> Self {
        Self {
            inputs: c.inputs,
            outputs: c.outputs,
            probs: c.probs.clone(),
        }
    }
}

impl ClassicalChannelJson {
    pub fn to_channel(&self) -> Result<ClassicalChannel> {
        ClassicalChannel::new(self.inputs, self.outputs, self.probs.clone())
    }
}

/// Inputs `x != x'` are adjacent when some output has positive probability under both.
pub fn confusability_graph(n: &ClassicalChannel) -> Graph {
    let mut g = Graph::empty(n.inputs);
    for row in &n.probs {
        let hit: Vec<usize> = (0..n.inputs).filter(|&x| row[x] > 1e-12).collect();
        for (a, &x) in hit.iter().enumerate() {
            for &x2 in &hit[a + 1..] {
                g.set_edge(x, x2, true);
            }
        }
    }
    g
}

/// Uniform distribution on `family[x]` for each input `x`.
pub fn channel_from_sets(family: &[Vec<usize>], outputs: usize) -> Result<ClassicalChannel> {
    let mut probs = vec![vec![0.0; family.len()]; outputs];
    for (x, set) in family.iter().enumerate() {
        let mut set = set.clone();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return Err(Error::EmptySet { index: x });
        }
        let p = 1.0 / set.len() as f64;
        for &y in &set {
            if y >= outputs {
                return Err(Error::InvalidInput(format!(
                    "token {y} out of range for {outputs} outputs"
                )));
            }
            probs[y][x] = p;
        }
    }
    ClassicalChannel::new(family.len(), outputs, probs)
}

/// Vertices adjacent iff their sets meet.
pub fn intersection_graph(family: &[Vec<usize>]) -> Graph {
    let n = family.len();
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if family[i].iter().any(|t| family[j].contains(t)) {
                g.set_edge(i, j, true);
            }
        }
    }
    g
}

/// Smallest output alphabet of a classical channel with confusability graph `g`.
/// It coincides with the intersection number.
pub fn complexity(g: &Graph) -> Result<usize> {
    Ok(exact::intersection_number(g)?.m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_single_output() {
        assert_eq!(confusability_graph(&ClassicalChannel::identity(4)), Graph::empty(4));
        let single = ClassicalChannel::new(3, 1, vec![vec![1.0; 3]]).unwrap();
        assert_eq!(confusability_graph(&single), Graph::complete(3));
    }

    #[test]
    fn sets_to_channel() {
        let c = channel_from_sets(&[vec![0], vec![1]], 2).unwrap();
        assert_eq!(c, ClassicalChannel::identity(2));
        let c = channel_from_sets(&[vec![0], vec![0]], 1).unwrap();
        assert_eq!(confusability_graph(&c), Graph::complete(2));
        assert!(matches!(
            channel_from_sets(&[vec![0], vec![]], 1),
            Err(Error::EmptySet { index: 1 })
        ));
    }

    #[test]
    fn pentagon_round_trip() {
        let c5 = Graph::cycle(5);
        let w = exact::intersection_number(&c5).unwrap();
        let ch = channel_from_sets(&w.family, w.m).unwrap();
        assert_eq!(confusability_graph(&ch), c5);
        assert_eq!(complexity(&c5).unwrap(), 5);
        assert_eq!(complexity(&Graph::complete(3)).unwrap(), 1);
        assert_eq!(complexity(&Graph::empty(4)).unwrap(), 4);
    }

    #[test]
    fn rejects_bad_columns() {
        assert!(ClassicalChannel::new(2, 1, vec![vec![1.0, 0.5]]).is_err());
        assert!(ClassicalChannel::new(1, 2, vec![vec![1.5], vec![-0.5]]).is_err());
        assert!(ClassicalChannel::new(1, 1, vec![vec![f64::NAN]]).is_err());
    }
}
