use std::time::Duration;

use url::Url;
use voxfeed_core::feed::{Credential, CredentialStore};
use voxfeed_portal::{FetchConfig, FetchError, Fetcher};
use voxfeed_testkit::stub::{Route, StubServer};
use voxfeed_testkit::NEWS_FEED_RSS;

fn fetcher() -> Fetcher {
    Fetcher::new(FetchConfig::default()).unwrap()
}

fn url(s: &str) -> Url {
    Url::parse(s).unwrap()
}

fn store(entries: &[(&str, &str, &str)]) -> CredentialStore {
    let mut store = CredentialStore::new();
    for (prefix, user, pass) in entries {
        store.insert(Credential::new(*prefix, *user, *pass).unwrap()).unwrap();
    }
    store
}

#[tokio::test]
async fn public_feed_passes_through() {
    let stub = StubServer::start();
    stub.route("/feed.rss", Route::rss(NEWS_FEED_RSS));
    let raw = fetcher().fetch(&url(&stub.url("/feed.rss")), &CredentialStore::new()).await.unwrap();
    assert_eq!(raw.status, 200);
    assert!(!raw.used_auth);
    assert_eq!(raw.content_type, "application/rss+xml");
    assert_eq!(raw.body, NEWS_FEED_RSS.as_bytes());
    assert_eq!(raw.final_url.as_str(), stub.url("/feed.rss"));
    assert_eq!(stub.requests()[0].authorization, None);
}

#[tokio::test]
async fn basic_auth_is_sent_once_after_a_challenge() {
    let stub = StubServer::start();
    stub.route("/cal/feed", Route::rss(NEWS_FEED_RSS).with_basic_auth("alice", "s3cret"));
    let creds = store(&[(&stub.origin(), "alice", "s3cret")]);
    let raw = fetcher().fetch(&url(&stub.url("/cal/feed")), &creds).await.unwrap();
    assert_eq!(raw.status, 200);
    assert!(raw.used_auth);

    let log = stub.requests();
    assert_eq!(log.len(), 2);
    assert_eq!(log[0].authorization, None);
    assert_eq!(log[1].basic_credentials().as_deref(), Some("alice:s3cret"));
    assert_eq!(log.iter().filter(|r| r.authorization.is_some()).count(), 1);
}

#[tokio::test]
async fn missing_credential_is_auth_required() {
    let stub = StubServer::start();
    stub.route("/cal/feed", Route::rss(NEWS_FEED_RSS).with_basic_auth("alice", "s3cret"));
    let err = fetcher().fetch(&url(&stub.url("/cal/feed")), &CredentialStore::new()).await.unwrap_err();
    assert!(matches!(err, FetchError::AuthRequired { .. }), "{err:?}");
    assert!(stub.requests().iter().all(|r| r.authorization.is_none()));

    // A credential for another host does not apply either.
    let other = store(&[("http://elsewhere.example", "alice", "s3cret")]);
    let err = fetcher().fetch(&url(&stub.url("/cal/feed")), &other).await.unwrap_err();
    assert!(matches!(err, FetchError::AuthRequired { .. }));
    assert!(stub.requests().iter().all(|r| r.authorization.is_none()));
}

#[tokio::test]
async fn wrong_credential_is_auth_required_after_one_retry() {
    let stub = StubServer::start();
    stub.route("/cal/feed", Route::rss(NEWS_FEED_RSS).with_basic_auth("alice", "s3cret"));
    let creds = store(&[(&stub.origin(), "alice", "wrong")]);
    let err = fetcher().fetch(&url(&stub.url("/cal/feed")), &creds).await.unwrap_err();
    assert!(matches!(err, FetchError::AuthRequired { .. }));
    assert_eq!(stub.requests().len(), 2);
}

#[tokio::test]
async fn longest_prefix_credential_is_used() {
    let stub = StubServer::start();
    stub.route("/a/b/feed", Route::rss(NEWS_FEED_RSS).with_basic_auth("deep", "pw2"));
    let creds = store(&[
        (&stub.origin(), "shallow", "pw1"),
        (&stub.url("/a"), "deep", "pw2"),
        (&stub.url("/a/b/c"), "deeper", "pw3"),
    ]);
    let raw = fetcher().fetch(&url(&stub.url("/a/b/feed")), &creds).await.unwrap();
    assert!(raw.used_auth);
    assert_eq!(stub.requests()[1].basic_credentials().as_deref(), Some("deep:pw2"));
}

#[tokio::test]
async fn credentials_never_cross_to_another_host() {
    let origin = StubServer::start();
    let target = StubServer::start();
    // Same port space, different host name: "localhost" is not 127.0.0.1.
    let foreign = format!("http://localhost:{}/feed", target.addr().port());
    origin.route("/feed", Route::redirect(302, &foreign));
    target.route("/feed", Route::rss(NEWS_FEED_RSS).with_basic_auth("alice", "s3cret"));
    let creds = store(&[(&origin.origin(), "alice", "s3cret")]);

    let err = fetcher().fetch(&url(&origin.url("/feed")), &creds).await.unwrap_err();
    assert!(matches!(err, FetchError::AuthRequired { .. }), "{err:?}");
    assert!(origin.requests().iter().all(|r| r.authorization.is_none()));
    assert!(!target.requests().is_empty());
    assert!(target.requests().iter().all(|r| r.authorization.is_none()));

    // A different port on the same host is a different origin too.
    let other_port = format!("{}/feed", target.origin());
    origin.route("/feed", Route::redirect(302, &other_port));
    target.clear_log();
    let err = fetcher().fetch(&url(&origin.url("/feed")), &creds).await.unwrap_err();
    assert!(matches!(err, FetchError::AuthRequired { .. }));
    assert!(target.requests().iter().all(|r| r.authorization.is_none()));
}

#[tokio::test]
async fn redirects_are_followed_up_to_five() {
    let stub = StubServer::start();
    for i in 0..6 {
        stub.route(&format!("/r{i}"), Route::redirect(301, &format!("/r{}", i + 1)));
    }
    stub.route("/r6", Route::rss(NEWS_FEED_RSS));

    let raw = fetcher().fetch(&url(&stub.url("/r1")), &CredentialStore::new()).await.unwrap();
    assert_eq!(raw.final_url.as_str(), stub.url("/r6"));
    assert_eq!(raw.status, 200);

    let err = fetcher().fetch(&url(&stub.url("/r0")), &CredentialStore::new()).await.unwrap_err();
    assert!(matches!(err, FetchError::RedirectLoop { .. }), "{err:?}");

    stub.route("/loop-a", Route::redirect(307, "/loop-b"));
    stub.route("/loop-b", Route::redirect(308, "/loop-a"));
    let err = fetcher().fetch(&url(&stub.url("/loop-a")), &CredentialStore::new()).await.unwrap_err();
    assert!(matches!(err, FetchError::RedirectLoop { .. }));
}

#[tokio::test]
async fn auth_applies_after_a_redirect_within_the_prefix() {
    let stub = StubServer::start();
    stub.route("/old", Route::redirect(302, "/private/feed"));
    stub.route("/private/feed", Route::rss(NEWS_FEED_RSS).with_basic_auth("bob", "pw"));
    let creds = store(&[(&stub.url("/private"), "bob", "pw")]);
    let raw = fetcher().fetch(&url(&stub.url("/old")), &creds).await.unwrap();
    assert!(raw.used_auth);
    assert_eq!(stub.requests_to("/old")[0].authorization, None);
    assert_eq!(stub.requests_to("/private/feed").iter().filter(|r| r.authorization.is_some()).count(), 1);
}

#[tokio::test]
async fn other_statuses_are_http_errors() {
    let stub = StubServer::start();
    stub.route("/gone", Route::status(410));
    stub.route("/boom", Route::status(500));
    stub.route("/moved-nowhere", Route::status(302));
    for (path, status) in [("/gone", 410), ("/boom", 500), ("/missing", 404), ("/moved-nowhere", 302)] {
        let err = fetcher().fetch(&url(&stub.url(path)), &CredentialStore::new()).await.unwrap_err();
        assert_eq!(
            err,
            FetchError::Http {
                url: stub.url(path),
                status
            }
        );
    }
}

#[tokio::test]
async fn refused_and_silent_servers_are_network_errors() {
    let closed = {
        let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        l.local_addr().unwrap()
    };
    let err = fetcher().fetch(&url(&format!("http://{closed}/feed")), &CredentialStore::new()).await.unwrap_err();
    assert!(matches!(err, FetchError::Network { .. }), "{err:?}");

    // Accepts the connection but never answers.
    let silent = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let quick = Fetcher::new(FetchConfig {
        connect_timeout: Duration::from_millis(200),
        total_timeout: Duration::from_millis(300),
    })
    .unwrap();
    let err = quick
        .fetch(&url(&format!("http://{}/feed", silent.local_addr().unwrap())), &CredentialStore::new())
        .await
        .unwrap_err();
    assert!(matches!(err, FetchError::Network { .. }), "{err:?}");
}

#[tokio::test]
async fn non_http_schemes_are_refused() {
    let err = fetcher().fetch(&url("ftp://example.com/feed"), &CredentialStore::new()).await.unwrap_err();
    assert_eq!(err, FetchError::UnsupportedScheme("ftp".into()));
}

#[tokio::test]
async fn userinfo_in_the_url_is_never_sent() {
    let stub = StubServer::start();
    stub.route("/feed", Route::rss(NEWS_FEED_RSS));
    let with_userinfo = stub.url("/feed").replace("http://", "http://mallory:pw@");
    fetcher().fetch(&url(&with_userinfo), &CredentialStore::new()).await.unwrap();
    assert_eq!(stub.requests()[0].authorization, None);
}
