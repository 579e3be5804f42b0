//! Three-dimensional complex FFT built from rustfft line transforms.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::par;

#[derive(Clone)]
struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Plans {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            }
        })
        .clone()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// Unnormalized in-place 3-D DFT of an `n³` row-major array.
pub(crate) fn fft3(data: &mut [Complex64], n: usize, dir: Direction) {
    debug_assert_eq!(data.len(), n * n * n);
    let p = plans(n);
    let fft = match dir {
        Direction::Forward => p.forward,
        Direction::Inverse => p.inverse,
    };
    let plane = n * n;

    // Axes 3 and 2 live inside one i1-plane.
    par::for_each_chunk_mut(data, plane, |_, chunk| {
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(chunk, &mut scratch);
        let mut t = vec![Complex64::default(); plane];
        transpose(chunk, &mut t, n);
        fft.process_with_scratch(&mut t, &mut scratch);
        transpose(&t, chunk, n);
    });

    // Axis 1: gather one (i3, i1) block per i2, transform, scatter back.
    let src: &[Complex64] = data;
    let blocks: Vec<Vec<Complex64>> = par::map_indexed(n, |i2| {
        let mut block = vec![Complex64::default(); plane];
        for i1 in 0..n {
            let row = &src[(i1 * n + i2) * n..(i1 * n + i2 + 1) * n];
            for (i3, v) in row.iter().enumerate() {
                block[i3 * n + i1] = *v;
            }
        }
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(&mut block, &mut scratch);
        block
    });
    par::for_each_chunk_mut(data, plane, |i1, chunk| {
        for (i2, block) in blocks.iter().enumerate() {
            let row = &mut chunk[i2 * n..(i2 + 1) * n];
            for (i3, v) in row.iter_mut().enumerate() {
                *v = block[i3 * n + i1];
            }
        }
    });
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for r in 0..n {
        for c in 0..n {
            dst[c * n + r] = src[r * n + c];
        }
    }
}
