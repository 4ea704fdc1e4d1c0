#![no_main]

use hypfq::cyclotomic::CycNumber;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(x) = serde_json::from_slice::<CycNumber>(data) {
        let text = serde_json::to_string(&x).unwrap();
        let back: CycNumber = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
    }
});
