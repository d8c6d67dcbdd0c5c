use hyperjump::witness::{self, CertificateFile, WitnessOptions};
use hyperjump::{graph, Exec};

fn options(seed: u64) -> WitnessOptions {
    WitnessOptions { seed, exec: Exec::Sequential, ..WitnessOptions::default() }
}

#[test]
fn emitted_certificate_reloads_and_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let (w, cert) = witness::run_witness(9, 4, &options(11)).unwrap();
    assert!(cert.is_valid());
    let path = dir.path().join("cert.json");
    let written = witness::emit_certificate(&cert, &path).unwrap();
    let loaded = witness::load_certificate(&path).unwrap();
    assert_eq!(loaded.certificate, written.certificate);
    assert_eq!(loaded.content_hash, cert.content_hash());

    // Round-trip the graph through its text form before re-checking.
    let text = graph::to_3g(&w.cone.graph, &[]);
    let (g, _) = graph::parse_3g(&text).unwrap();
    let outcome = witness::reverify(&loaded, Some(&g), Exec::Sequential).unwrap();
    assert!(outcome.valid, "{:?}", outcome.problems);
}

#[test]
fn edited_fields_are_caught() {
    let (w, cert) = witness::run_witness(7, 4, &options(2)).unwrap();
    let file = CertificateFile::new(cert.clone());

    let mut forged = file.clone();
    forged.certificate.subsets_checked += 1;
    let outcome = witness::reverify(&forged, None, Exec::Sequential).unwrap();
    assert!(!outcome.valid);

    // Recomputing the hash hides the edit from the hash check but not from the content checks.
    let mut rehashed = cert.clone();
    rehashed.lower_bound = "1/2".into();
    let outcome = witness::reverify(&CertificateFile::new(rehashed), None, Exec::Sequential).unwrap();
    assert!(!outcome.valid);

    let mut other = w.cone.graph.clone();
    let extra = [0, 1, w.cone.apex];
    if !other.contains_edge(extra) {
        other = hyperjump::ThreeGraph::new(other.vertex_count(), &[other.edges(), &[extra]].concat()).unwrap();
    } else {
        let kept: Vec<_> = other.edges().iter().copied().filter(|e| *e != extra).collect();
        other = hyperjump::ThreeGraph::new(other.vertex_count(), &kept).unwrap();
    }
    let outcome = witness::reverify(&file, Some(&other), Exec::Sequential).unwrap();
    assert!(!outcome.valid);
}

#[test]
fn unknown_fields_are_rejected() {
    let (_, cert) = witness::run_witness(7, 4, &options(0)).unwrap();
    let json = CertificateFile::new(cert).to_json();
    let edited = json.replacen("\"version\"", "\"extra\": 1,\n    \"version\"", 1);
    assert!(CertificateFile::from_json(&edited).is_err());
    assert!(CertificateFile::from_json("{").is_err());
}
