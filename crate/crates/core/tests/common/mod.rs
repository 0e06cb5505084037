//! Brute-force oracles shared by the integration tests. They use only the
//! public field arithmetic and never the library's enumeration machinery.

#![allow(dead_code)]

use lrc_core::{FieldSpec, LinearCode, Symbol};

/// Every vector of `F_q^len`, first coordinate most significant.
pub fn all_vectors(q: u32, len: usize) -> Vec<Vec<Symbol>> {
    let total = (q as usize).pow(len as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0; len];
            for slot in v.iter_mut().rev() {
                *slot = (idx % q as usize) as Symbol;
                idx /= q as usize;
            }
            v
        })
        .collect()
}

/// `u · G` by the textbook double loop.
pub fn naive_encode(code: &LinearCode, message: &[Symbol]) -> Vec<Symbol> {
    let f = code.field();
    let g = code.generator();
    (0..code.n())
        .map(|j| (0..code.k()).fold(0, |acc, i| f.add(acc, f.mul(message[i], g.symbol(i, j)))))
        .collect()
}

pub fn codewords(code: &LinearCode) -> Vec<Vec<Symbol>> {
    all_vectors(code.field().order(), code.k())
        .iter()
        .map(|m| naive_encode(code, m))
        .collect()
}

pub fn hamming(x: &[Symbol], y: &[Symbol]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

/// Minimum distance as the smallest distance between two distinct codewords.
pub fn all_pairs_distance(code: &LinearCode) -> usize {
    let words = codewords(code);
    let mut best = usize::MAX;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            best = best.min(hamming(&words[i], &words[j]));
        }
    }
    best
}

/// Number of vectors of `F_q^n` at distance at most `s` from zero.
pub fn ball_count(q: u32, n: usize, s: usize) -> usize {
    all_vectors(q, n)
        .iter()
        .filter(|v| v.iter().filter(|&&x| x != 0).count() <= s)
        .count()
}

/// Rank by naive Gaussian elimination over `field`.
pub fn naive_rank(field: &FieldSpec, vectors: &[Vec<Symbol>]) -> usize {
    let mut rows: Vec<Vec<Symbol>> = vectors.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        let inv = field.inv(pivot[col]).unwrap();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let factor = field.mul(row[col], inv);
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        rank += 1;
    }
    rank
}
