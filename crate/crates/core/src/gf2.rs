//! Row reduction over GF(2).

use crate::bits::Bits;

/// Reduced row echelon form of `rows`.
///
/// Returns the nonzero reduced rows together with their pivot columns. Pivot
/// columns are chosen left to right, so every returned row has a one at its
/// pivot and every other returned row has a zero there.
pub fn rref(rows: &[Bits]) -> (Vec<Bits>, Vec<usize>) {
    let width = rows.first().map_or(0, Bits::len);
    let mut m: Vec<Bits> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..m.len()).find(|&i| m[i].get(col)) else {
            continue;
        };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(col) {
                *row ^= &pivot_row;
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Bits]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{h : h·row = 0 for every row}` over vectors of length `width`.
pub fn null_space(rows: &[Bits], width: usize) -> Vec<Bits> {
    let (reduced, pivots) = rref(rows);
    let mut is_pivot = vec![false; width];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..width)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut h = Bits::zeros(width);
            h.set(free, true);
            for (row, &p) in reduced.iter().zip(&pivots) {
                if row.get(free) {
                    h.set(p, true);
                }
            }
            h
        })
        .collect()
}
