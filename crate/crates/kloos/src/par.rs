//! Rayon-backed helpers. Every result is collected in index order, so the
//! output does not depend on the thread count.

use kloos_core::expsum::{kloosterman_row, KloostermanTable};
use kloos_core::{FieldCtx, FieldElement};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

pub fn thread_pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        b = b.num_threads(t);
    }
    b.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

pub fn kloosterman_table_par(ctx: &FieldCtx) -> KloostermanTable {
    let values: Vec<i64> = (0..ctx.q())
        .into_par_iter()
        .map(|a| if a == 0 { 0 } else { kloosterman_row(ctx, FieldElement(a as u16)) })
        .collect();
    KloostermanTable::from_values(ctx.q(), values).expect("table has q slots")
}

/// Runs independent jobs in parallel, returning results in input order.
pub fn run_ordered<T, R, F>(jobs: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    jobs.into_par_iter().map(f).collect()
}
