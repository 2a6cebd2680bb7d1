//! Machine-integer test that a set of integer vectors spans `Z^k`.
//!
//! Rows are folded one at a time into an echelon basis with unimodular
//! two-row operations (extended gcd on the pivot column). The rows span
//! `Z^k` iff the final basis has a pivot in every column and every pivot
//! is a unit.

use num_integer::Integer;

/// `None` when an intermediate value overflows; callers then fall back to
/// the arbitrary-precision route.
pub(crate) fn rows_span_unit_lattice(
    rows: impl IntoIterator<Item = Vec<i64>>,
    k: usize,
) -> Option<bool> {
    let mut basis: Vec<Option<Vec<i128>>> = vec![None; k];
    for row in rows {
        debug_assert_eq!(row.len(), k);
        let mut v: Vec<i128> = row.into_iter().map(i128::from).collect();
        for c in 0..k {
            if v[c] == 0 {
                continue;
            }
            let Some(b) = basis[c].as_mut() else {
                basis[c] = Some(v);
                break;
            };
            let ext = b[c].extended_gcd(&v[c]);
            let (g, s, t) = (ext.gcd, ext.x, ext.y);
            let (bc, vc) = (b[c] / g, v[c] / g);
            for l in c..k {
                let nb = s.checked_mul(b[l])?.checked_add(t.checked_mul(v[l])?)?;
                let nv = bc.checked_mul(v[l])?.checked_sub(vc.checked_mul(b[l])?)?;
                b[l] = nb;
                v[l] = nv;
            }
            debug_assert_eq!(v[c], 0);
        }
    }
    Some(
        basis
            .iter()
            .enumerate()
            .all(|(c, b)| b.as_ref().is_some_and(|b| b[c].abs() == 1)),
    )
}
