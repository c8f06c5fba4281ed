use std::path::PathBuf;

use clap::Args;
use rootdatum::Params;

use crate::Failure;

/// Settings shared by every subcommand. Each flag can also come from an
/// `RDK_*` environment variable; explicit flags win.
#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Tensor powers examined by the order certificates.
    #[arg(long, global = true, env = "RDK_N_MAX", default_value_t = 3)]
    pub n_max: usize,

    /// Depth of the (λ ⊗ λ*)^j supports used as θ candidates.
    #[arg(long, global = true, env = "RDK_THETA_DEPTH", default_value_t = 2)]
    pub theta_depth: usize,

    /// Window bound for generated oracles.
    #[arg(long, global = true, env = "RDK_BOUND", default_value_t = 4)]
    pub bound: u64,

    /// Seed for opaque label generation.
    #[arg(long, global = true, env = "RDK_SEED", default_value_t = 1)]
    pub seed: u64,

    /// Largest lattice box the covering check will enumerate.
    #[arg(long, global = true, env = "RDK_POINT_BUDGET", default_value_t = 200_000)]
    pub point_budget: usize,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "RDK_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// Directory searched for datum files given by bare name.
    #[arg(long, global = true, env = "RDK_FIXTURES", default_value = "fixtures")]
    pub fixtures: PathBuf,
}

impl Config {
    pub fn validate(&self) -> Result<(), Failure> {
        for (name, v) in [
            ("n-max", self.n_max as u64),
            ("theta-depth", self.theta_depth as u64),
            ("bound", self.bound),
            ("point-budget", self.point_budget as u64),
        ] {
            if v == 0 {
                return Err(Failure::Input(format!("--{name} must be at least 1")));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Params {
        Params {
            n_max: self.n_max,
            theta_depth: self.theta_depth,
        }
    }

    /// A path as given, or failing that `<fixtures>/<name>` and
    /// `<fixtures>/<name>.json`.
    pub fn resolve(&self, spec: &str) -> PathBuf {
        let direct = PathBuf::from(spec);
        if direct.exists() {
            return direct;
        }
        [self.fixtures.join(spec), self.fixtures.join(format!("{spec}.json"))]
            .into_iter()
            .find(|p| p.exists())
            .unwrap_or(direct)
    }
}

#[cfg(test)]
mod tests {
    use clap::Parser;

    use super::*;

    #[derive(Parser)]
    struct Wrap {
        #[command(flatten)]
        config: Config,
    }

    fn parse(args: &[&str]) -> Config {
        Wrap::try_parse_from(std::iter::once("rootdatum").chain(args.iter().copied()))
            .unwrap()
            .config
    }

    #[test]
    fn defaults_and_overrides() {
        let c = parse(&[]);
        assert_eq!((c.n_max, c.theta_depth, c.bound, c.seed), (3, 2, 4, 1));
        let c = parse(&["--bound", "7", "--n-max", "2"]);
        assert_eq!((c.bound, c.n_max), (7, 2));
        assert_eq!(c.params().n_max, 2);
    }

    #[test]
    fn zero_bounds_are_input_errors() {
        assert!(parse(&[]).validate().is_ok());
        for flag in ["--n-max", "--theta-depth", "--bound", "--point-budget"] {
            assert!(matches!(parse(&[flag, "0"]).validate(), Err(Failure::Input(_))), "{flag}");
        }
    }

    #[test]
    fn bare_names_resolve_into_the_fixture_directory() {
        let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
        let c = parse(&["--fixtures", fixtures.to_str().unwrap()]);
        assert_eq!(c.resolve("sl3"), fixtures.join("sl3.json"));
        assert_eq!(c.resolve("nonexistent"), PathBuf::from("nonexistent"));
    }
}
