#![no_main]

use std::sync::OnceLock;

use hypfq::field::FiniteField;
use hypfq::input::parse_character;
use libfuzzer_sys::fuzz_target;

fn fields() -> &'static [FiniteField] {
    static FIELDS: OnceLock<Vec<FiniteField>> = OnceLock::new();
    FIELDS.get_or_init(|| [7, 9, 13, 25].into_iter().map(|q| FiniteField::of_order(q).unwrap()).collect())
}

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for f in fields() {
        if let Ok(chi) = parse_character(s, f) {
            assert!(chi.exponent() < f.unit_order());
            let again = parse_character(&chi.exponent().to_string(), f).unwrap();
            assert_eq!(again, chi);
        }
    }
});
