use std::path::{Path, PathBuf};

use ncc_core::cluster::ClusterStrategy;
use ncc_core::expansion::Rational;
use ncc_core::io::parse_strategy;
use ncc_core::routing::DEFAULT_EXACT_MAX_M;

use crate::failure::Failure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategySource {
    DoubleFan,
    File(PathBuf),
}

impl StrategySource {
    pub fn parse(arg: Option<&Path>) -> Self {
        match arg {
            None => Self::DoubleFan,
            Some(p) if p.as_os_str() == "double-fan" => Self::DoubleFan,
            Some(p) => Self::File(p.to_path_buf()),
        }
    }

    pub fn load(&self, m: usize) -> Result<ClusterStrategy, Failure> {
        let s = match self {
            Self::DoubleFan => ClusterStrategy::double_fan(m)?,
            Self::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
                let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("file");
                parse_strategy(&text, name)?
            }
        };
        if s.dimension() != m {
            return Err(Failure::usage(format!("strategy is for m={}, but --m {m} was given", s.dimension())));
        }
        Ok(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

/// Settings shared by the counting subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub m: usize,
    pub strategy: StrategySource,
    pub mode: Mode,
    pub balance: Rational,
    pub out_dir: Option<PathBuf>,
    /// Largest `m` allowed in exact mode.
    pub exact_max_m: usize,
}

impl RunConfig {
    pub fn new(
        m: usize,
        strategy: StrategySource,
        mode: Mode,
        balance: Rational,
        out_dir: Option<PathBuf>,
        allow_large_exact: bool,
    ) -> Result<Self, Failure> {
        let zero = Rational::from_integer(0);
        if balance <= zero || balance >= Rational::new(1, 2) {
            return Err(Failure::usage(format!("balance constant {balance} must lie in (0, 1/2)")));
        }
        let exact_max_m = if allow_large_exact { usize::MAX } else { DEFAULT_EXACT_MAX_M };
        if mode == Mode::Exact && m > exact_max_m {
            return Err(Failure::usage(format!(
                "exact counting at m={m} is expensive; use --sample or pass --i-know-exact-is-slow"
            )));
        }
        if let Mode::Sampled { samples: 0, .. } = mode {
            return Err(Failure::usage("--sample must be positive"));
        }
        Ok(Self { m, strategy, mode, balance, out_dir, exact_max_m })
    }

    /// Writes `contents` to `<out_dir>/<name>` when an output directory is set.
    pub fn write_output(&self, name: &str, contents: &str) -> Result<(), Failure> {
        if let Some(dir) = &self.out_dir {
            std::fs::create_dir_all(dir)
                .map_err(|e| Failure::io(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join(name);
            std::fs::write(&path, contents)
                .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: usize, mode: Mode, c: Rational, allow: bool) -> Result<RunConfig, Failure> {
        RunConfig::new(m, StrategySource::DoubleFan, mode, c, None, allow)
    }

    #[test]
    fn balance_must_be_inside_open_interval() {
        let third = Rational::new(1, 3);
        assert!(cfg(5, Mode::Exact, third, false).is_ok());
        for bad in [Rational::from_integer(0), Rational::new(1, 2), Rational::new(3, 4)] {
            assert_eq!(cfg(5, Mode::Exact, bad, false).unwrap_err().code(), 2);
        }
    }

    #[test]
    fn exact_mode_is_capped_unless_overridden() {
        let third = Rational::new(1, 3);
        assert!(cfg(8, Mode::Exact, third, false).is_err());
        assert!(cfg(8, Mode::Exact, third, true).is_ok());
        assert!(cfg(8, Mode::Sampled { samples: 10, seed: 1 }, third, false).is_ok());
        assert!(cfg(8, Mode::Sampled { samples: 0, seed: 1 }, third, false).is_err());
    }

    #[test]
    fn strategy_dimension_must_match() {
        let dir = std::env::temp_dir().join(format!("ncc-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("fan5.txt");
        let text = ncc_core::io::write_strategy(&ClusterStrategy::double_fan(5).unwrap());
        std::fs::write(&path, text).unwrap();
        let src = StrategySource::parse(Some(&path));
        assert_eq!(src.load(5).unwrap().name(), "fan5");
        assert_eq!(src.load(6).unwrap_err().code(), 2);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
