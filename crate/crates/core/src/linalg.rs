//! Dense linear algebra over GF(p).

/// Row-reduce `rows` (each of equal length) modulo `p` in place; returns
/// pivot columns. Zero rows are removed. Pivots are leftmost and normalized to 1.
pub fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_multiple_of(p)) else { continue };
        rows.swap(r, k);
        let inv = crate::primes::inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_multiple_of(p) {
                let f = rows[k][c] % p;
                let pivot = rows[r].clone();
                for (x, v) in rows[k].iter_mut().zip(&pivot) {
                    *x = (*x % p + p * p - f * v % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, p).len()
}

/// Basis of the null space {x : rows·x = 0} in GF(p)^ncols.
pub fn nullspace(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let pivots = if m.is_empty() { vec![] } else { rref(&mut m, p) };
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; ncols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[i][f]) % p;
            }
            v
        })
        .collect()
}

/// Whether `v` lies in the row span of `rows`.
pub fn in_span(rows: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let mut m = rows.to_vec();
    let r0 = rank(&m, p);
    m.push(v.to_vec());
    rank(&m, p) == r0
}

/// Projective points of GF(p)^n restricted to the span of `basis`:
/// one representative per 1-dimensional subspace, first nonzero coordinate
/// in basis-coefficient space equal to 1.
pub fn projective_points(basis: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let k = basis.len();
    let n = basis.first().map_or(0, |b| b.len());
    let mut out = Vec::new();
    for lead in 0..k {
        let tail = k - lead - 1;
        let count = (p as usize).pow(tail as u32);
        for idx in 0..count {
            let mut coef = vec![0u64; k];
            coef[lead] = 1;
            let mut t = idx;
            for j in (lead + 1..k).rev() {
                coef[j] = (t % p as usize) as u64;
                t /= p as usize;
            }
            let mut v = vec![0u64; n];
            for (c, b) in coef.iter().zip(basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + c * y) % p;
                }
            }
            out.push(v);
        }
    }
    out
}

pub fn dot(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).map(|(x, y)| x * y % p).sum::<u64>() % p
}
