// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use discurv::doc::CurveDocument;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(doc) = CurveDocument::parse(data) else { return };
    // validation must reject, never panic
    if let Ok(curve) = doc.curve() {
        let _ = curve.curvature();
        let again = CurveDocument::from_curve(&curve).to_json();
        assert!(CurveDocument::parse(again.as_bytes()).is_ok());
    }
    let _ = doc.certificate();
});
