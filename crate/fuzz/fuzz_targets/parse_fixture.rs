#![no_main]

use cmonv::fixture::Fixtures;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = Fixtures::parse(data);
});
