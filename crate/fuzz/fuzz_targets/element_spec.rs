#![no_main]

use std::sync::OnceLock;

use hypfq::field::FiniteField;
use hypfq::input::{format_element, parse_element};
use libfuzzer_sys::fuzz_target;

fn fields() -> &'static [FiniteField] {
    static FIELDS: OnceLock<Vec<FiniteField>> = OnceLock::new();
    FIELDS.get_or_init(|| [5, 9, 13, 27].into_iter().map(|q| FiniteField::of_order(q).unwrap()).collect())
}

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for f in fields() {
        if let Ok(y) = parse_element(s, f) {
            let code = format_element(y, f);
            assert_eq!(parse_element(&code, f).unwrap(), y);
        }
    }
});
