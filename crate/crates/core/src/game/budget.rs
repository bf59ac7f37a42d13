use std::env;

/// Limits on exhaustive game solving. Exceeding one is an error, never a
/// silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum `C(n, k)` for enumerating size-k configurations.
    pub configs: u64,
    /// Maximum number of transition tests in one safe-set computation.
    pub transitions: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            configs: 1_000_000,
            transitions: 100_000_000,
        }
    }
}

impl Budget {
    /// Reads `EVC_BUDGET` as `<configs>` or `<configs>,<transitions>`,
    /// falling back to the defaults for missing or malformed parts.
    pub fn from_env() -> Budget {
        env::var("EVC_BUDGET")
            .ok()
            .map(|s| Budget::parse(&s))
            .unwrap_or_default()
    }

    pub fn parse(s: &str) -> Budget {
        let mut b = Budget::default();
        let mut parts = s.split(',').map(str::trim);
        if let Some(c) = parts.next().and_then(|p| p.parse().ok()) {
            b.configs = c;
        }
        if let Some(t) = parts.next().and_then(|p| p.parse().ok()) {
            b.transitions = t;
        }
        b
    }
}
