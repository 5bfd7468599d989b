use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use curvmorse::geometry::Tolerances;
use serde::{Serialize, Serializer};

/// Either an explicit vector or `random:k`, i.e. `k` seeded draws.
#[derive(Clone, Debug, PartialEq)]
pub enum DirectionSpec {
    Explicit(Vec<f64>),
    Random(usize),
}

impl FromStr for DirectionSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(k) = s.strip_prefix("random:") {
            return k
                .parse()
                .map(DirectionSpec::Random)
                .map_err(|_| format!("bad direction count {k:?}"));
        }
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad direction component {x:?}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(DirectionSpec::Explicit)
    }
}

impl fmt::Display for DirectionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DirectionSpec::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(f64::to_string).collect();
                write!(f, "{}", parts.join(","))
            }
            DirectionSpec::Random(k) => write!(f, "random:{k}"),
        }
    }
}

impl Serialize for DirectionSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Everything that determines a command's output; embedded in every artifact.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub input: String,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tolerances: Tolerances,
    pub filtration: Option<String>,
    pub direction: Option<DirectionSpec>,
    /// Command-specific flags.
    pub options: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn option(mut self, key: &str, value: impl ToString) -> Self {
        self.options.insert(key.to_string(), value.to_string());
        self
    }
}
