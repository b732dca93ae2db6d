use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(script: &str) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "asymcover_py").unwrap();
        asymcover_py::register(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("ac", m).unwrap();
        let code = CString::new(script).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("script failed");
        }
    });
}

#[test]
fn code_roundtrip() {
    with_module(
        r#"
c = ac.Code(3, ["111", "011", "100"], 1)
assert len(c) == 3 and c.n == 3 and c.r == 1
assert c.covers() and c.covering_radius() == 1
assert c.level_profile() == [0, 1, 1, 1]
assert ac.Code.parse(c.to_json()) == c
top = ac.Code(3, ["111"])
assert not top.covers(1)
assert len(top.uncovered(1)) == 4
assert top.complement_ones().words == ["000"]
assert ac.Code(3, ["111", "110"]).contraction(3).words == ["11"]
try:
    ac.Code(3, ["0101"])
    raise AssertionError("expected ValueError")
except ValueError:
    pass
"#,
    );
}

#[test]
fn bounds_and_search() {
    with_module(
        r#"
assert ac.asym_sphere_bound(4, 1) == 5
assert ac.sphere_bound_symmetric(4, 1) == 4
assert ac.superdiag_lower(5, 2) == 5
assert ac.ip_plus(4, 1) == 6
assert ac.ip_phi(2, 1) == 1
res = ac.exact_kplus(5, 2)
assert res["status"] == "exact" and res["upper"] == 5 and res["witness"].covers(2)
rec = ac.best_bounds(6, 3)
assert (rec["lower"], rec["upper"], rec["lower_tag"], rec["upper_tag"]) == (4, 4, "superdiag", "d")
assert len(ac.diagonal_code(6, 3)) == 4
assert ac.greedy_code(4, 1).covers()
assert ac.random_code_nu(6, 2, seed=3).covers()
assert len(ac.direct_sum(ac.diagonal_code(3, 2), ac.diagonal_code(1, 0))) == 3
assert ac.general_upper_code(9, 5).covers()
assert ac.k_plus(5, 2) == 3 and ac.min_linear_dim(4, 2, exhaustive=True) == 2
basis, span = ac.a_code(5, 2)
assert len(basis) == 3 and len(span) == 8 and span.covers(2)
try:
    ac.exact_kplus(8, 1)
    raise AssertionError("expected ValueError")
except ValueError:
    pass
"#,
    );
}
