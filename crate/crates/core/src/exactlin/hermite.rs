use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-style Hermite normal form of the lattice spanned by `vectors` (each of length `width`).
///
/// Returns the non-zero rows: echelon shape, positive pivots, and every entry above a pivot
/// reduced into `[0, pivot)`. Two generating sets of the same lattice give the same output.
pub fn row_hermite_form(vectors: Vec<Vec<BigInt>>, width: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vectors;
    for r in &rows {
        assert_eq!(r.len(), width, "vector length must equal width");
    }
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut t = 0;
    for c in 0..width {
        if t == rows.len() {
            break;
        }
        loop {
            let best = (t..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i][c].abs());
            let Some(p) = best else { break };
            rows.swap(t, p);
            let mut clean = true;
            for i in t + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[t][c]);
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[t], &q);
                if !tail[0][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if t < rows.len() && !rows[t][c].is_zero() {
            if rows[t][c].is_negative() {
                for x in rows[t].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            pivots.push((t, c));
            t += 1;
        }
    }
    rows.truncate(t);
    for &(pr, pc) in &pivots {
        for i in 0..pr {
            let q = rows[i][pc].div_floor(&rows[pr][pc]);
            if !q.is_zero() {
                let (head, tail) = rows.split_at_mut(pr);
                sub_multiple(&mut head[i], &tail[0], &q);
            }
        }
    }
    rows
}

fn sub_multiple(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    for (x, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *x -= q * s;
        }
    }
}
