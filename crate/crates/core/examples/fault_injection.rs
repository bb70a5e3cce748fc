//! Corrupts a valid certificate one field at a time and shows which check
//! catches each mutation. Also round-trips the certificate through JSON.

use asw_tower::gene::GeneWord;
use asw_tower::weave::faults::Fault;
use asw_tower::weave::{build_weave, verify_weave, BuildOptions, WeaveCertificate};

fn main() -> asw_tower::Result<()> {
    let cert = build_weave(&GeneWord::parse("W,W")?, 2, 1, &BuildOptions::default())?;
    let json = cert.to_json()?;
    assert_eq!(WeaveCertificate::from_json(&json)?, cert);
    println!("W,W certificate: {} bytes of JSON, verifies: {}", json.len(), verify_weave(&cert).pass);

    for fault in Fault::ALL {
        let bad = fault.apply(&cert)?;
        let report = verify_weave(&bad);
        let caught = report.failed(fault.level(&cert), fault.expected());
        println!(
            "{:<20} expected {:<28} {}",
            fault.name(),
            fault.expected().to_string(),
            if caught { "caught" } else { "MISSED" }
        );
        if let Some(first) = report.failures.first() {
            println!("{:<20} first failure: {first}", "");
        }
    }
    Ok(())
}
