//! Self-test battery: the ring identity suite and twelve seeded property
//! checks. Each check returns the number of cases it ran or a failure note.

mod align;
mod nf_checks;
mod precision;
mod ring_checks;
pub mod instances;

use std::sync::Arc;

use crate::bdr::{BdrRing, PrecisionProfile};
use crate::error::Error;

pub use align::Align;
pub use ring_checks::identity_suite;

type Check = std::result::Result<usize, String>;

pub(crate) fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub(crate) fn lib<T>(r: crate::error::Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e: Error| format!("{what}: {e}"))
}

pub(crate) fn ring(p: u64, k: u32, n: u32, alpha: u32) -> Arc<BdrRing> {
    BdrRing::new(PrecisionProfile::new(p, k, n, alpha, 1).expect("built-in profile")).expect("built-in profile")
}

pub const TITLES: [&str; 12] = [
    "root-of-unity identity",
    "ring kernel",
    "action compatibility",
    "trace decomposition",
    "log/exp roundtrip",
    "gauge intertwining",
    "twisted Sylvester",
    "block diagonalization",
    "twisted M-th roots",
    "cocycle extension",
    "alpha = 1 degeneration",
    "precision metamorphism",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub cases: usize,
    pub detail: String,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {:>2} {} ({} cases)", self.id, self.title, self.cases)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Run check `id` (1 to 12) with the given base seed.
pub fn run_criterion(id: u32, seed: u64) -> Outcome {
    let result = match id {
        1 => ring_checks::root_of_unity(),
        2 => ring_checks::kernel(),
        3 => ring_checks::action_compatibility(seed),
        4 => ring_checks::traces(seed),
        5 => ring_checks::roundtrip(seed),
        6 => ring_checks::intertwining(seed),
        7 => nf_checks::sylvester(seed),
        8 => nf_checks::block_diagonal(seed),
        9 => nf_checks::mth_roots(seed),
        10 => nf_checks::extension(seed),
        11 => nf_checks::degeneration(seed),
        12 => precision::metamorphism(seed),
        _ => fail(format!("no check numbered {id}")),
    };
    let title = TITLES.get(id.wrapping_sub(1) as usize).copied().unwrap_or("unknown");
    match result {
        Ok(cases) => Outcome { id, title, pass: true, cases, detail: String::new() },
        Err(detail) => Outcome { id, title, pass: false, cases: 0, detail },
    }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    (1..=12).map(|id| run_criterion(id, seed)).collect()
}

#[cfg(test)]
mod tests;
