//! Dense linear algebra over a prime field GF(p).
//!
//! Entries are `u64` residues in `[0, p)` with `p < 2^31`, so products fit
//! in a `u64` without overflow. Only rank and kernel bases are needed;
//! chain groups in this engine have at most a few dozen coordinates.

/// Reduces a signed integer into `[0, p)`.
pub fn residue(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// Multiplicative inverse in GF(p) by the extended Euclidean algorithm.
/// `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of a noninvertible residue");
    s0.rem_euclid(p as i64) as u64
}

/// Reduced row echelon form over GF(p). Returns the nonzero reduced rows
/// and their pivot columns in increasing order.
pub fn rref_mod(rows: &[Vec<u64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x % p).collect())
        .collect();
    let ncols = m.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(src) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, src);
        let inv = inv_mod(m[row][col], p);
        for x in &mut m[row] {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in col..ncols {
                    m[r][c] = (m[r][c] + (p - f % p) * m[row][c]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    (m, pivots)
}

/// Rank over GF(p).
pub fn rank_mod(rows: &[Vec<u64>], p: u64) -> usize {
    rref_mod(rows, p).0.len()
}

/// Canonical right-kernel basis over GF(p), one vector per free column.
pub fn kernel_basis_mod(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let (m, pivots) = rref_mod(rows, p);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (r, &piv) in pivots.iter().enumerate() {
            v[piv] = (p - m[r][free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

/// Checks `p` for primality by trial division; field orders are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
