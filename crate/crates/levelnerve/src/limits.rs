//! Resource bounds shared by the orbit and cover builders.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest orbit (or generated group) any enumeration may reach.
    pub max_orbit: usize,
    /// Largest cover degree.
    pub max_degree: usize,
    /// Worker threads; 0 means the rayon default.
    pub workers: usize,
    /// Soft cap on memory, in bytes, taken from `LEVELNERVE_MAX_MEM`.
    pub max_mem: Option<u64>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_orbit: 2_000_000,
            max_degree: 4096,
            workers: 1,
            max_mem: std::env::var("LEVELNERVE_MAX_MEM")
                .ok()
                .and_then(|s| s.trim().parse().ok()),
        }
    }
}

impl Limits {
    pub fn check_orbit(&self, what: &str, reached: usize) -> Result<()> {
        if reached > self.max_orbit {
            return Err(Error::Resource {
                what: what.to_string(),
                limit: self.max_orbit,
                reached,
            });
        }
        Ok(())
    }

    pub fn check_degree(&self, what: &str, reached: usize) -> Result<()> {
        if reached > self.max_degree {
            return Err(Error::Resource {
                what: what.to_string(),
                limit: self.max_degree,
                reached,
            });
        }
        Ok(())
    }

    /// Rough allocation guard: `items * bytes_each` against `max_mem`.
    pub fn check_mem(&self, what: &str, items: usize, bytes_each: usize) -> Result<()> {
        if let Some(cap) = self.max_mem {
            let need = (items as u64).saturating_mul(bytes_each as u64);
            if need > cap {
                return Err(Error::Resource {
                    what: format!("{what} memory"),
                    limit: cap as usize,
                    reached: need as usize,
                });
            }
        }
        Ok(())
    }

    /// Run `f` inside a pool with the configured worker count.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        let mut b = rayon::ThreadPoolBuilder::new();
        if self.workers > 0 {
            b = b.num_threads(self.workers);
        }
        match b.build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}
