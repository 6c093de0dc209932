//! Test-only reference implementations, written against the raw value
//! table so they share no code path with the library.

#![allow(dead_code)]

use ratio_shapley::game::random_monotone_game;
use ratio_shapley::Game;

/// Average marginal contribution over every ordering, enumerated with
/// Heap's algorithm.
pub fn brute_force_phi(n: usize, values: &[f64], ratio: bool) -> Vec<f64> {
    let contribution = |before: usize, after: usize| -> f64 {
        let (lo, hi) = (values[before], values[after]);
        if ratio {
            if lo == 0.0 {
                0.0
            } else {
                hi / lo - 1.0
            }
        } else {
            hi - lo
        }
    };
    let mut sums = vec![0.0; n];
    let mut visit = |order: &[usize]| {
        let mut mask = 0usize;
        for &p in order {
            sums[p] += contribution(mask, mask | 1 << p);
            mask |= 1 << p;
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut count = 1u64;
    visit(&order);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            visit(&order);
            count += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    sums.into_iter().map(|s| s / count as f64).collect()
}

/// `(φ_i / φ*)^ρ · v` straight from the definition.
pub fn reference_rewards(phi: &[f64], rho: f64, value: f64) -> Vec<f64> {
    let top = phi.iter().copied().fold(0.0, f64::max);
    phi.iter()
        .map(|&p| if top == 0.0 { value } else { (p / top).powf(rho) * value })
        .collect()
}

pub fn g2() -> Game {
    Game::new(2, vec![0.0, 1.0, 2.0, 4.0]).unwrap()
}

/// `h` on `n − 1` players extended by a player `u` that never changes a
/// value; `standalone` is v({u}).
pub fn with_null_player(h: &Game, u: usize, standalone: f64) -> Game {
    let n = h.n() + 1;
    let low = (1usize << u) - 1;
    let values = (0..1usize << n)
        .map(|mask| {
            if mask == 1 << u {
                return standalone;
            }
            let rest = mask & !(1 << u);
            let reduced = (rest & low) | ((rest >> 1) & !low);
            h.values()[reduced]
        })
        .collect();
    Game::new(n, values).unwrap()
}

/// `v(C) = max(h(C), h(C with i and j swapped))`, which makes `i` and `j`
/// symmetric.
pub fn symmetrized(h: &Game, i: usize, j: usize) -> Game {
    let swap = |mask: usize| {
        let (bi, bj) = (mask >> i & 1, mask >> j & 1);
        (mask & !(1 << i) & !(1 << j)) | (bj << i) | (bi << j)
    };
    let values = (0..h.values().len())
        .map(|m| h.values()[m].max(h.values()[swap(m)]))
        .collect();
    Game::new(h.n(), values).unwrap()
}

/// Plain random monotone games, `n` cycling through `2..=6`.
pub fn random_corpus(count: usize, seed_base: u64) -> Vec<Game> {
    (0..count)
        .map(|k| random_monotone_game(2 + k % 5, seed_base + k as u64).unwrap())
        .collect()
}

/// Random games carrying injected structure: useless players (with and
/// without a standalone value) and symmetric pairs.
pub fn structured_corpus(count: usize, seed_base: u64) -> Vec<Game> {
    (0..count)
        .map(|k| {
            let seed = seed_base + k as u64;
            let n = 3 + k % 4;
            match k % 3 {
                0 => {
                    let h = random_monotone_game(n - 1, seed).unwrap();
                    with_null_player(&h, k % n, 0.0)
                }
                1 => {
                    let h = random_monotone_game(n - 1, seed).unwrap();
                    let floor = (0..h.n()).map(|p| h.standalone(p)).fold(f64::INFINITY, f64::min);
                    with_null_player(&h, k % n, 0.5 * floor)
                }
                _ => {
                    let h = random_monotone_game(n, seed).unwrap();
                    symmetrized(&h, 0, n - 1)
                }
            }
        })
        .collect()
}
