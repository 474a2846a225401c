use std::path::{Path, PathBuf};

use lueratio::painleve::{self, Mode, SystemParams, Trajectory, TRAJECTORY_SCHEMA_VERSION};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Changes whenever solver output could change for identical inputs.
pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+traj", "1");

/// Everything a trajectory depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveKey {
    pub params: SystemParams,
    pub x0: f64,
    pub x_max: f64,
    pub tol: f64,
    pub mode: Mode,
}

impl SolveKey {
    pub fn new(params: SystemParams, x_max: f64, tol: f64, mode: Mode) -> Self {
        Self { params, x0: painleve::default_x0(&params), x_max, tol, mode }
    }

    /// Hex SHA-256 of the exact bit patterns of the inputs and the version tag.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(CODE_VERSION.as_bytes());
        h.update(TRAJECTORY_SCHEMA_VERSION.to_le_bytes());
        for v in [self.params.alpha, self.params.r, self.x0, self.x_max, self.tol] {
            h.update(v.to_bits().to_le_bytes());
        }
        h.update([match self.mode {
            Mode::Shoot => 0u8,
            Mode::Collocate => 1u8,
        }]);
        hex::encode(h.finalize())
    }

    fn matches(&self, t: &Trajectory) -> bool {
        t.params == self.params
            && t.x_switch.to_bits() == self.x_max.min(painleve::x_tail(&self.params)).to_bits()
            && t.x0.to_bits() == self.x0.to_bits() && t.tol.to_bits() == self.tol.to_bits() && t.mode == self.mode
    }
}

/// Content-addressed store of solved trajectories.
#[derive(Debug, Clone)]
pub struct TrajectoryCache {
    dir: PathBuf,
}

impl TrajectoryCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path(&self, key: &SolveKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// A stored trajectory whose recorded inputs match the key exactly.
    pub fn load(&self, key: &SolveKey) -> Option<Trajectory> {
        let bytes = std::fs::read(self.path(key)).ok()?;
        let t: Trajectory = serde_json::from_slice(&bytes).ok()?;
        key.matches(&t).then_some(t)
    }

    pub fn store(&self, key: &SolveKey, t: &Trajectory) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.dir).map_err(|e| CliError::io(self.dir.display(), e))?;
        let path = self.path(key);
        let bytes = serde_json::to_vec(t).map_err(|e| CliError::io(path.display(), e))?;
        // Write then rename so a concurrent reader never sees a partial file.
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, bytes).map_err(|e| CliError::io(tmp.display(), e))?;
        std::fs::rename(&tmp, &path).map_err(|e| CliError::io(path.display(), e))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

/// Solves, consulting the cache first when one is given.
pub fn solve_cached(key: &SolveKey, cache: Option<&TrajectoryCache>) -> Result<(Trajectory, bool), CliError> {
    if let Some(t) = cache.and_then(|c| c.load(key)) {
        return Ok((t, true));
    }
    let t = painleve::solve_from(key.params, key.x0, key.x_max, key.tol, key.mode).map_err(lueratio::Error::from)?;
    if let Some(c) = cache {
        c.store(key, &t)?;
    }
    Ok((t, false))
}
