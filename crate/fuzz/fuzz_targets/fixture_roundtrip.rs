#![no_main]

use cmonv::fixture::{FixtureWriter, Fixtures};
use libfuzzer_sys::fuzz_target;

// anything that builds must survive writing out and reading back
fuzz_target!(|data: &str| {
    let Ok(f) = Fixtures::parse(data) else { return };
    let mut w = FixtureWriter::new(f.field);
    for (name, c) in &f.complexes {
        w.complex(name, c);
    }
    for (name, m) in &f.maps {
        w.map(name, m);
    }
    for (name, m) in &f.monoids {
        w.monoid(name, m);
    }
    let text = w.finish().to_json();
    let back = Fixtures::parse(&text).expect("written fixture parses");
    for (name, c) in &f.complexes {
        assert!(back.complexes[name].same_data(c));
    }
});
