#![no_main]

use hypfq::field::FiniteField;
use hypfq::input::{parse_field_descriptor, parse_field_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_field_list(s);
    if let Ok((p, n)) = parse_field_descriptor(s) {
        // keep table builds cheap
        if p.checked_pow(n).is_some_and(|q| q <= 4096) {
            if let Ok(f) = FiniteField::new(p, n) {
                assert_eq!(f.order() as u64, p.pow(n));
                assert_eq!(parse_field_descriptor(&f.descriptor()).unwrap(), (p, n));
            }
        }
    }
});
