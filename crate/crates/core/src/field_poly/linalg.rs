//! Dense linear algebra over F_p on small matrices.

use super::field::FieldParams;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(p: FieldParams, rows: &mut Vec<Vec<u8>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = p.inv(rows[r][col]).unwrap();
        for x in rows[r].iter_mut() {
            *x = p.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let f = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = p.sub(*x, p.mul(f, y));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(p: FieldParams, rows: &[Vec<u8>]) -> usize {
    let mut m = rows.to_vec();
    rref(p, &mut m).len()
}

/// Basis (in RREF) of `{v : A v = 0}` for `A` with `ncols` columns.
pub fn nullspace(p: FieldParams, rows: &[Vec<u8>], ncols: usize) -> Vec<Vec<u8>> {
    let mut a = rows.to_vec();
    let pivots = rref(p, &mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vec<u8>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![0u8; ncols];
            v[fc] = 1;
            for (row, &pc) in a.iter().zip(&pivots) {
                v[pc] = p.neg(row[fc]);
            }
            v
        })
        .collect();
    rref(p, &mut basis);
    basis
}
