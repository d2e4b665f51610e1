//! Inputs shared by the benchmarks.

use specfact_core::{
    parse_descriptor, parse_ratfn, FieldDescriptor, PhiRow, PoleSpec, RatMatrix, Scope,
    TriangularFactor, UnitRow,
};

fn tower_scope() -> Scope {
    let f = parse_descriptor("Q(sqrt 5)(sqrt (3-s1))").expect("descriptor");
    let mut scope = Scope::new(&f);
    let a = f.root(2);
    let b = f.from_int(2).checked_div(&a).expect("nonzero root");
    scope.define("a", a).expect("name");
    scope.define("b", b).expect("name");
    scope
}

/// The 2x2 lower-triangular factor over the quartic tower.
pub fn tower_factor() -> TriangularFactor {
    let scope = tower_scope();
    let rf = |s: &str| parse_ratfn(s, &scope).expect("literal");
    let m = RatMatrix::new(
        &scope.field,
        vec![
            vec![rf("b+a z"), rf("0")],
            vec![rf("(7+22z+11z^2)/(a+b z)"), rf("(1-z^2)/(b+a z)")],
        ],
    )
    .expect("square");
    let z0 = scope
        .field
        .root(1)
        .checked_sub(&scope.field.from_int(3))
        .expect("same field");
    let z0 = z0.checked_div(&scope.field.from_int(2)).expect("nonzero");
    TriangularFactor::new(
        m,
        vec![vec![], vec![PoleSpec::new(z0, 1).expect("in disk")]],
    )
    .expect("valid factor")
}

/// A rational unit row of length 3 with a simple reflected pole.
pub fn rational_row() -> UnitRow {
    let q = FieldDescriptor::rational();
    let scope = Scope::new(&q);
    let entries = ["(3z+3)/(5z+6)", "(4z+5)/(5z+6)", "(z+1)/(6z+5)"]
        .iter()
        .map(|s| parse_ratfn(s, &scope).expect("literal"))
        .collect();
    let pole = || vec![PoleSpec::new(q.from_ratio(-5, 6), 1).expect("in disk")];
    UnitRow::new(&q, entries, vec![pole(), pole(), pole()], vec![]).expect("valid row")
}

/// A 4x4 row of functions with three poles of order 3 each, the largest
/// system size the randomized checks exercise.
pub fn dense_phi_row() -> PhiRow {
    let q = FieldDescriptor::rational();
    let scope = Scope::new(&q);
    let fs: Vec<_> = [
        "1/(z-1/2)^3 + 2/(z+2/3)^2 - 3/(z-1/5)^3",
        "-2/(z-1/2)^2 + 1/(z+2/3)^3 + 5/(z-1/5)",
        "3/(z-1/2) - 4/(z+2/3) + 1/(z-1/5)^2",
    ]
    .iter()
    .map(|s| parse_ratfn(s, &scope).expect("literal"))
    .collect();
    let poles = [q.from_ratio(1, 2), q.from_ratio(-2, 3), q.from_ratio(1, 5)];
    PhiRow::from_functions(&q, &fs, &poles).expect("valid row")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_valid() {
        assert_eq!(tower_factor().size(), 2);
        assert_eq!(rational_row().m(), 3);
        assert_eq!(dense_phi_row().m(), 4);
    }
}
