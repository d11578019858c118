use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use metaforge::sources::{record_fixture, FetchSpec, Fetcher, FixtureMeta, SourceError};
use metaforge_core::Format;

struct Route {
    status: u16,
    content_type: Option<&'static str>,
    body: String,
}

type RequestLog = Arc<Mutex<Vec<(String, String)>>>;

/// Minimal HTTP/1.1 server: one response per connection. Returns the
/// base URL and the log of (path, Accept header) pairs.
fn serve(routes: Vec<(&'static str, Route)>) -> (String, RequestLog) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    let routes: HashMap<&str, Route> = routes.into_iter().collect();
    let log = Arc::new(Mutex::new(Vec::new()));
    let seen = Arc::clone(&log);
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request_line = String::new();
            if reader.read_line(&mut request_line).is_err() {
                continue;
            }
            let path = request_line.split_whitespace().nth(1).unwrap_or("/").to_string();
            let mut accept = String::new();
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
                    break;
                }
                if let Some((k, v)) = line.split_once(':') {
                    if k.eq_ignore_ascii_case("accept") {
                        accept = v.trim().to_string();
                    }
                }
            }
            seen.lock().unwrap().push((path.clone(), accept));
            let (status, ct, body) = match routes.get(path.as_str()) {
                Some(r) => (r.status, r.content_type, r.body.as_str()),
                None => (404, Some("text/plain"), "not found"),
            };
            let mut head = format!(
                "HTTP/1.1 {status} X\r\nContent-Length: {}\r\nConnection: close\r\n",
                body.len()
            );
            if let Some(ct) = ct {
                head.push_str(&format!("Content-Type: {ct}\r\n"));
            }
            head.push_str("\r\n");
            let _ = stream.write_all(head.as_bytes());
            let _ = stream.write_all(body.as_bytes());
        }
    });
    (base, log)
}

fn ok(content_type: Option<&'static str>, body: &str) -> Route {
    Route {
        status: 200,
        content_type,
        body: body.into(),
    }
}

fn online() -> Fetcher {
    Fetcher::online(Duration::from_secs(5))
}

#[test]
fn fetches_json_and_xml() {
    let (base, log) = serve(vec![
        ("/repo", ok(Some("application/json; charset=utf-8"), r#"{"name": "x"}"#)),
        (
            "/a/b/x-1.0.pom",
            ok(Some("application/octet-stream"), "<project><name>x</name></project>"),
        ),
        ("/sniffed", ok(None, "  <project/>")),
    ]);
    let doc = online().fetch(&FetchSpec::new(format!("{base}/repo"))).unwrap();
    assert_eq!(doc.format(), Format::Json);
    let pom = online()
        .fetch(&FetchSpec::new(format!("{base}/a/b/x-1.0.pom")))
        .unwrap();
    assert_eq!(pom.format(), Format::Xml);
    let sniffed = online().fetch(&FetchSpec::new(format!("{base}/sniffed"))).unwrap();
    assert_eq!(sniffed.format(), Format::Xml);
    let log = log.lock().unwrap();
    assert!(log
        .iter()
        .all(|(_, accept)| accept == "application/json, application/xml"));
}

#[test]
fn http_errors() {
    let (base, _) = serve(vec![
        (
            "/gone",
            Route {
                status: 410,
                content_type: None,
                body: String::new(),
            },
        ),
        ("/broken", ok(Some("application/json"), "{\"a\": ")),
    ]);
    match online().fetch(&FetchSpec::new(format!("{base}/missing"))) {
        Err(SourceError::Status { status: 404, .. }) => {}
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        online().fetch(&FetchSpec::new(format!("{base}/gone"))),
        Err(SourceError::Status { status: 410, .. })
    ));
    assert!(matches!(
        online().fetch(&FetchSpec::new(format!("{base}/broken"))),
        Err(SourceError::Parse { .. })
    ));
    // Nothing listens on port 9 of this address.
    assert!(matches!(
        Fetcher::online(Duration::from_secs(2)).fetch(&FetchSpec::new("http://127.0.0.1:9/x")),
        Err(SourceError::Network { .. })
    ));
}

#[test]
fn record_then_replay() {
    let (base, log) = serve(vec![("/api/records/1", ok(Some("application/json"), r#"{"id": 1}"#))]);
    let url = format!("{base}/api/records/1");
    let dir = tempfile::tempdir().unwrap();
    let path = record_fixture(&FetchSpec::new(url.clone()), dir.path(), Duration::from_secs(5)).unwrap();
    assert!(path.to_string_lossy().ends_with("_api_records_1.json"));
    let meta: FixtureMeta = serde_json::from_str(
        &fs::read_to_string(path.with_file_name(format!("{}.meta.json", path.file_stem().unwrap().to_string_lossy())))
            .unwrap(),
    )
    .unwrap();
    assert_eq!(meta.url, url);
    assert_eq!(meta.content_type.as_deref(), Some("application/json"));
    assert_eq!(meta.retrieved.len(), 10);

    let requests = log.lock().unwrap().len();
    let replayed = Fetcher::replay(dir.path()).fetch(&FetchSpec::new(url.clone())).unwrap();
    let live = online().fetch(&FetchSpec::new(url)).unwrap();
    assert_eq!(replayed.json(), live.json());
    // Replay made no request; the live fetch made one.
    assert_eq!(log.lock().unwrap().len(), requests + 1);
}

fn run(args: &[String]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["metaforge".to_string()];
    full.extend_from_slice(args);
    let code = metaforge::run(full, None, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn online_pipeline_and_record_command() {
    let gh = include_str!("../../../fixtures/shexml/api.github.com_repos_herminiogg_ShExML.json");
    let (base, _) = serve(vec![("/repos/herminiogg/ShExML", ok(Some("application/json"), gh))]);
    let dir = tempfile::tempdir().unwrap();
    let template = include_str!("../../core/templates/github.shexml.tmpl").replace(
        "https://api.github.com/repos/{{owner}}/{{repo}}",
        &format!("{base}/repos/herminiogg/ShExML"),
    );
    let mapping = dir.path().join("github.shexml");
    fs::write(&mapping, template).unwrap();
    let s = |p: &std::path::Path| p.to_str().unwrap().to_string();

    let out = dir.path().join("out");
    let (code, stdout, stderr) = run(&[
        "pipeline".into(),
        "--mapping".into(),
        s(&mapping),
        "--online".into(),
        "--out".into(),
        s(&out),
    ]);
    assert_eq!(code, 0, "{stdout}{stderr}");
    let online_doc = fs::read(out.join("codemeta.json")).unwrap();

    let fx = dir.path().join("fx");
    let (code, stdout, stderr) = run(&[
        "record".into(),
        "--mapping".into(),
        s(&mapping),
        "--fixtures".into(),
        s(&fx),
    ]);
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains(" -> "));

    let replay_out = dir.path().join("replay");
    let (code, _, stderr) = run(&[
        "pipeline".into(),
        "--mapping".into(),
        s(&mapping),
        "--fixtures".into(),
        s(&fx),
        "--out".into(),
        s(&replay_out),
    ]);
    assert_eq!(code, 0, "{stderr}");
    assert_eq!(fs::read(replay_out.join("codemeta.json")).unwrap(), online_doc);

    let (code, _, stderr) = run(&["record".into(), format!("{base}/nope"), "--fixtures".into(), s(&fx)]);
    assert_eq!(code, 3);
    assert!(stderr.contains("404"));
}
