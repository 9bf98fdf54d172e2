//! Data-parallel evaluation of independent jobs.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] runs
//! on the rayon global pool; without it every request runs sequentially.
//! Results are always returned in input order, so output is identical
//! across execution modes.

use crate::error::Result;
use crate::numkit::ComplexMatrix;
use crate::synth3q::{synthesize_with, SynthOptions, Synthesis};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// `items.iter().map(f)` in the requested mode.
pub fn map<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Synthesizes each unitary independently.
pub fn synthesize_batch(
    unitaries: &[ComplexMatrix],
    opts: &SynthOptions,
    exec: Execution,
) -> Vec<Result<Synthesis>> {
    map(unitaries, exec, |u| synthesize_with(u, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::emit_text;
    use crate::numkit::haar_unitary;

    #[test]
    fn modes_agree_and_keep_order() {
        let us: Vec<ComplexMatrix> = (0..6).map(|s| haar_unitary(8, s)).collect();
        let opts = SynthOptions::default();
        let seq = synthesize_batch(&us, &opts, Execution::Sequential);
        let par = synthesize_batch(&us, &opts, Execution::Parallel);
        for (a, b) in seq.iter().zip(&par) {
            let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            assert_eq!(emit_text(&a.circuit), emit_text(&b.circuit));
        }
        let squares = map(&[1, 2, 3], Execution::Parallel, |x| x * x);
        assert_eq!(squares, vec![1, 4, 9]);
    }
}
