use smallcover_core::chain::{quotient_by_action, CellAction, Representative};
use smallcover_core::gf2::{Gf2Matrix, Gf2Vector};
use smallcover_core::small_cover::SmallCoverComplex;
use smallcover_core::{CharacteristicFunction, SimplePolytope};

fn torus() -> SmallCoverComplex {
    let lambda = CharacteristicFunction::new(Gf2Matrix::parse_rows(2, &["10", "10", "01", "01"]).unwrap());
    SmallCoverComplex::build(&SimplePolytope::cube(2).unwrap(), &lambda).unwrap()
}

fn v(s: &str) -> Gf2Vector {
    Gf2Vector::parse(s).unwrap()
}

#[test]
fn quotient_in_two_stages_matches_direct_quotient() {
    let x = torus();
    let whole = x.translation_action(&[v("10"), v("01")]).unwrap();
    let direct = quotient_by_action(x.complex(), &whole, Representative::Lowest).unwrap();

    let diag = x.translation_action(&[v("11")]).unwrap();
    let first = quotient_by_action(x.complex(), &diag, Representative::Lowest).unwrap();
    // the residual group is generated by the class of 10
    let shift = x.translation_action(&[v("10")]).unwrap();
    let residual: Vec<Vec<usize>> = (0..x.complex().dims())
        .map(|d| {
            let mut perm = vec![usize::MAX; first.complex.cell_count(d)];
            for k in 0..x.complex().cell_count(d) {
                perm[first.orbit_of[d][k]] = first.orbit_of[d][shift.image(0, d, k)];
            }
            perm
        })
        .collect();
    let residual = CellAction::new(&first.complex, vec![residual]).unwrap();
    let second = quotient_by_action(&first.complex, &residual, Representative::Lowest).unwrap();

    assert_eq!(second.complex.cell_counts(), direct.complex.cell_counts());
    assert_eq!(second.complex.betti_mod2(), direct.complex.betti_mod2());
    // X/Z₂² is the square itself
    assert_eq!(direct.complex.cell_counts(), [4, 4, 1]);
    assert_eq!(direct.complex.betti_mod2(), [1, 0, 0]);
}

#[test]
fn torus_quotient_cell_counts() {
    let x = torus();
    assert_eq!(x.complex().cell_counts(), [4, 8, 4]);
    let diag = x.translation_action(&[v("11")]).unwrap();
    let q = quotient_by_action(x.complex(), &diag, Representative::Lowest).unwrap();
    assert_eq!(q.complex.cell_counts(), [4, 4, 2]);
    assert_eq!(q.complex.euler_characteristic(), 2);
    let high = quotient_by_action(x.complex(), &diag, Representative::Highest).unwrap();
    assert_eq!(q, high);
}
