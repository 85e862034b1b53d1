use serde::Serialize;

use mmpm_core::mmpm::{phi, Mmpm};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExploreReport {
    pub matrix: String,
    pub normal_form: String,
    pub order: u64,
    pub orbit_count: u64,
    pub transitive: bool,
}

/// Accepts the matrix text format `r N; p0 … ; u0 …`, or `phi:c:r:N` for the
/// canonical `Φ(c)`.
pub fn parse_matrix(spec: &str) -> Result<Mmpm> {
    if let Some(rest) = spec.trim().strip_prefix("phi:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let bad = || BenchError::Preset(format!("expected phi:c:r:N, got {spec:?}"));
        let [c, r, n] = parts[..] else {
            return Err(bad());
        };
        let c: i64 = c.parse().map_err(|_| bad())?;
        let r: usize = r.parse().map_err(|_| bad())?;
        let n: usize = n.parse().map_err(|_| bad())?;
        if r == 0 || !n.is_power_of_two() {
            return Err(bad());
        }
        return Ok(phi(c, r, n));
    }
    Ok(spec.parse()?)
}

pub fn mmpm_explore(spec: &str) -> Result<ExploreReport> {
    let a = parse_matrix(spec)?;
    Ok(ExploreReport {
        matrix: a.to_string(),
        normal_form: a.normal_form().to_string(),
        order: a.order(),
        orbit_count: a.orbit_count(),
        transitive: a.is_transitive(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_phi() {
        let id = mmpm_explore("3 4; 0 1 2; 0 0 0").unwrap();
        assert_eq!((id.order, id.orbit_count, id.transitive), (1, 24, false));
        let p = mmpm_explore("phi:1:3:4").unwrap();
        assert_eq!((p.order, p.orbit_count, p.transitive), (24, 1, true));
        assert!(mmpm_explore("phi:1:3").is_err());
        assert!(mmpm_explore("phi:1:0:4").is_err());
        assert!(mmpm_explore("3 4; 0 1; 0 0 0").is_err());
    }
}
