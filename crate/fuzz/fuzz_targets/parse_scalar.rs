#![no_main]

use cmonv::linalg::{Field, Scalar};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = data.parse::<Field>();
    for field in [Field::Rational, Field::Prime(2), Field::Prime(7)] {
        if let Ok(s) = Scalar::parse(field, data) {
            let again = Scalar::parse(field, &s.to_string()).expect("printed scalar parses");
            assert_eq!(s, again);
        }
    }
});
