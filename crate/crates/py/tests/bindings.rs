use std::ffi::CString;

use pyo3::prelude::*;
use superqubit_py::superqubit_py;

fn run(code: &str) {
    pyo3::append_to_inittab!(superqubit_py);
    Python::initialize();
    Python::attach(|py| {
        let code = CString::new(code).unwrap();
        if let Err(e) = py.run(&code, None, None) {
            e.display(py);
            panic!("python code raised");
        }
    });
}

#[test]
fn module_round_trip() {
    run(r#"
import json
import superqubit_py as sq
bell = sq.parse_state("(1/sqrt(2))(|00> + |11>)")
assert abs(sq.sdet(bell).body - 0.5) < 1e-12
assert sq.classify(bell) == "AB"
w = sq.State("(1/sqrt(6))(|110> + |101> + |011> + |**1> + |*1*> + |1**>)")
assert sq.classify(w) == "W"
assert json.loads(sq.invariants_json(w))["n"] == 3
a = sq.Grassmann.generator(0, 1)
assert (a * a).is_zero()
try:
    sq.parse_state("|0")
    raise AssertionError("accepted")
except ValueError:
    pass
"#);
}
