//! Built-in named groups. `S3` exists solely as a negative control for the
//! Q x H decomposition.

use crate::group::{self, Group};

/// The quaternion group of order 8.
///
/// Element encoding: `0:+1, 1:-1, 2:+i, 3:-i, 4:+j, 5:-j, 6:+k, 7:-k`
/// (unit index * 2 + sign bit).
pub fn quaternion8() -> Group {
    // unit multiplication over {1, i, j, k}: (sign, unit)
    const UNIT_MUL: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mut table = vec![0usize; 64];
    for a in 0..8 {
        for b in 0..8 {
            let (ua, sa) = (a / 2, a % 2);
            let (ub, sb) = (b / 2, b % 2);
            let (sprod, uprod) = UNIT_MUL[ua][ub];
            let sign = (sa + sb + sprod) % 2;
            table[a * 8 + b] = uprod * 2 + sign;
        }
    }
    Group::from_table(8, table, Some("Q8".into())).expect("Q8 table is a group")
}

/// The dihedral group of order 8 (symmetries of a square), from the rotation
/// `(0 1 2 3)` and the reflection fixing vertices 0 and 2.
pub fn dihedral4() -> Group {
    let mut g = group::from_permutations(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
        .expect("D4 generators close");
    g.name = Some("D4".into());
    g
}

/// The symmetric group on 3 points.
pub fn sym3() -> Group {
    let mut g =
        group::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3 generators close");
    g.name = Some("S3".into());
    g
}

/// The Klein four-group Z2 x Z2.
pub fn klein4() -> Group {
    let mut g = group::from_permutations(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
        .expect("V4 generators close");
    g.name = Some("V4".into());
    g
}

/// Looks up a non-cyclic catalog group by name. Cyclic groups are spelled
/// `Z<n>` and handled by the group-spec parser directly.
pub fn catalog_group(name: &str) -> Option<Group> {
    match name {
        "Q8" => Some(quaternion8()),
        "D4" => Some(dihedral4()),
        "S3" => Some(sym3()),
        "V4" => Some(klein4()),
        _ => None,
    }
}

/// All named catalog groups plus a few cyclic ones, for exhaustive property
/// tests.
pub fn all_catalog_groups() -> Vec<Group> {
    let mut out = vec![quaternion8(), dihedral4(), sym3(), klein4()];
    for n in [1usize, 2, 3, 4, 6, 8, 9, 12] {
        out.push(group::build_cyclic(n).unwrap());
    }
    let z2 = group::build_cyclic(2).unwrap();
    let z4 = group::build_cyclic(4).unwrap();
    let z3 = group::build_cyclic(3).unwrap();
    out.push(group::direct_product(&z2, &z4).unwrap());
    out.push(group::direct_product(&z3, &z3).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::element_order;

    #[test]
    fn catalog_orders() {
        assert_eq!(quaternion8().order(), 8);
        assert_eq!(dihedral4().order(), 8);
        assert_eq!(sym3().order(), 6);
        assert_eq!(klein4().order(), 4);
    }

    #[test]
    fn q8_structure() {
        let q8 = quaternion8();
        // unique involution -1
        let invs: Vec<usize> =
            q8.elements().filter(|&x| element_order(&q8, x) == 2).collect();
        assert_eq!(invs, vec![1]);
        // i * j = k
        assert_eq!(q8.mul(2, 4), 6);
        // j * i = -k
        assert_eq!(q8.mul(4, 2), 7);
    }

    #[test]
    fn d4_is_nonabelian_with_five_involutions() {
        let d4 = dihedral4();
        let invs = d4.elements().filter(|&x| element_order(&d4, x) == 2).count();
        assert_eq!(invs, 5);
    }
}
