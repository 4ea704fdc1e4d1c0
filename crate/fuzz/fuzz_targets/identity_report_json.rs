#![no_main]

use hypfq::verify::IdentityReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<IdentityReport>(data) {
        let text = serde_json::to_string(&r).unwrap();
        let back: IdentityReport = serde_json::from_str(&text).unwrap();
        // NaN deviations are not representable in JSON and never round-trip
        if r.max_deviation.is_finite() {
            assert_eq!(back.tested, r.tested);
            assert_eq!(back.skipped, r.skipped);
        }
    }
});
