#![allow(dead_code)]

use ild::numeric::{rat, Rat};
use ild::plmap::PLMap;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const GRID: i64 = 12;

/// Random surjective map with at most `max_points` breakpoints on the 1/12 grid.
pub fn random_map(rng: &mut ChaCha8Rng, max_points: usize) -> PLMap {
    loop {
        let interior = rng.gen_range(1..=max_points - 2);
        let mut xs: Vec<i64> = (1..GRID).collect();
        for i in (1..xs.len()).rev() {
            xs.swap(i, rng.gen_range(0..=i));
        }
        let mut xs: Vec<i64> = xs[..interior].to_vec();
        xs.push(0);
        xs.push(GRID);
        xs.sort();
        let ys: Vec<i64> = xs.iter().map(|_| rng.gen_range(0..=GRID)).collect();
        if !ys.contains(&0) || !ys.contains(&GRID) || ys.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let pts: Vec<(Rat, Rat)> = xs.iter().zip(&ys).map(|(x, y)| (rat(*x, GRID), rat(*y, GRID))).collect();
        if let Ok(f) = PLMap::new(pts) {
            return f;
        }
    }
}

/// Turning values of `g` listed left to right, with the values at 0 and 1 at the ends.
fn profile(g: &PLMap) -> Vec<Rat> {
    let pts = g.points();
    let mut out = vec![pts[0].1.clone()];
    for w in pts.windows(3) {
        let (a, b, c) = (&w[0].1, &w[1].1, &w[2].1);
        if (b > a) == (b > c) {
            out.push(b.clone());
        }
    }
    out.push(pts[pts.len() - 1].1.clone());
    out
}

/// Infimum of zigzag magnitudes of `g`, by scanning every run of consecutive turning points.
///
/// A zigzag over the run `t_i..t_j` needs the laps on either side to overshoot the run's
/// range strictly, one above and one below; its magnitude then exceeds the range.
pub fn brute_force_min_zigzag(g: &PLMap) -> Option<Rat> {
    let v = profile(g);
    let turning = v.len() - 2;
    let mut best: Option<Rat> = None;
    for i in 1..=turning {
        let (mut lo, mut hi) = (v[i].clone(), v[i].clone());
        for j in i..=turning {
            if v[j] < lo {
                lo = v[j].clone();
            }
            if v[j] > hi {
                hi = v[j].clone();
            }
            if j == i {
                continue;
            }
            let (left, right) = (&v[i - 1], &v[j + 1]);
            let ok = (left > &hi && right < &lo) || (left < &lo && right > &hi);
            if ok {
                let span = &hi - &lo;
                if best.as_ref().map_or(true, |b| &span < b) {
                    best = Some(span);
                }
            }
        }
    }
    best
}

pub fn eval_f64(f: &PLMap, x: f64) -> f64 {
    f.eval_f64(x)
}

pub fn iterate_f64(f: &PLMap, x: f64, n: usize) -> f64 {
    (0..n).fold(x, |x, _| f.eval_f64(x).clamp(0.0, 1.0))
}

/// Grid samples of `f^n` at `points` equally spaced points of [0, 1].
pub fn grid_samples(f: &PLMap, n: usize, points: usize) -> Vec<f64> {
    (0..points).map(|k| iterate_f64(f, k as f64 / (points - 1) as f64, n)).collect()
}

/// Largest margin of a zigzag pattern visible in the samples, if any.
///
/// The margin is how far the interior stays strictly inside the endpoint values and how
/// large the interior fold is.
pub fn grid_zigzag_margin(s: &[f64]) -> Option<f64> {
    let mut best: Option<f64> = None;
    // Local extrema of the sample sequence, with endpoints.
    let mut ext: Vec<f64> = vec![s[0]];
    for w in s.windows(3) {
        if (w[1] > w[0] && w[1] >= w[2]) || (w[1] < w[0] && w[1] <= w[2]) {
            ext.push(w[1]);
        }
    }
    ext.push(s[s.len() - 1]);
    let turning = ext.len() - 2;
    for i in 1..=turning {
        let (mut lo, mut hi) = (ext[i], ext[i]);
        for j in i + 1..=turning {
            lo = lo.min(ext[j]);
            hi = hi.max(ext[j]);
            let (l, r) = (ext[i - 1], ext[j + 1]);
            let fold = hi - lo;
            let m = if l > hi && r < lo {
                (l - hi).min(lo - r).min(fold)
            } else if l < lo && r > hi {
                (lo - l).min(r - hi).min(fold)
            } else {
                continue;
            };
            if best.map_or(true, |b| m > b) {
                best = Some(m);
            }
        }
    }
    best
}
