use crate::error::{Error, Result};

/// Work limits for the parts of the engine that can run away on large input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of Pollard rho steps spent on one integer after trial division.
    pub factor_steps: u64,
    /// Maximum size of a finite module enumerated element-by-element by the oracle.
    pub oracle_cap: u64,
    /// Maximum number of search nodes one oracle decision may visit.
    pub oracle_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            factor_steps: 2_000_000,
            oracle_cap: 4096,
            oracle_nodes: 50_000_000,
        }
    }
}

impl Budget {
    /// Parses overrides of the form `factor=100000,oracle=8192,nodes=1000000`.
    /// Unmentioned fields keep their current value.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("budget item `{item}` is not key=value")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("budget value `{value}` is not an integer")))?;
            if value == 0 {
                return Err(Error::Parse(format!("budget `{key}` must be positive")));
            }
            match key.trim() {
                "factor" => self.factor_steps = value,
                "oracle" => self.oracle_cap = value,
                "nodes" => self.oracle_nodes = value,
                other => return Err(Error::Parse(format!("unknown budget key `{other}`"))),
            }
        }
        Ok(self)
    }

    /// Default budget with the `CAPLAB_BUDGET` environment variable applied.
    pub fn from_env() -> Result<Self> {
        match std::env::var("CAPLAB_BUDGET") {
            Ok(spec) => Budget::default().with_overrides(&spec),
            Err(_) => Ok(Budget::default()),
        }
    }
}
