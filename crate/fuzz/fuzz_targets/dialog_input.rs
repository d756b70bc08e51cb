#![no_main]

use libfuzzer_sys::fuzz_target;
use voxfeed_core::dialog::DialogInput;
use voxfeed_portal::api::InputRequest;

fuzz_target!(|data: &[u8]| {
    let _ = serde_json::from_slice::<DialogInput>(data);
    if let Ok(req) = serde_json::from_slice::<InputRequest>(data) {
        let _ = req.to_input();
    }
});
