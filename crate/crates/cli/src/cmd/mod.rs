pub mod atlas;
pub mod blowup;
pub mod flow;
pub mod soliton;
pub mod symmetry;

use std::path::{Path, PathBuf};

/// Settings shared by every subcommand.
pub struct Context {
    pub out: PathBuf,
    pub seed: u64,
    pub verbose: bool,
    /// Directory of the configuration file; relative paths in it resolve here.
    pub config_dir: Option<PathBuf>,
}

impl Context {
    pub fn log(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    pub fn input(&self, p: &Path) -> PathBuf {
        crate::config::resolve_path(self.config_dir.as_deref(), p)
    }
}
