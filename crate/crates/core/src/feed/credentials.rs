use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::Url;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CredentialError {
    #[error("credential prefix {0:?} is not an absolute http(s) URL")]
    InvalidPrefix(String),
    #[error("credential username is empty")]
    EmptyUsername,
    #[error("a credential for {0} already exists")]
    DuplicatePrefix(String),
}

/// A username/password pair that applies to every URL under `url_prefix`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CredentialRepr")]
pub struct Credential {
    url_prefix: String,
    username: String,
    password: String,
    #[serde(skip)]
    scope: Scope,
}

#[derive(Deserialize)]
struct CredentialRepr {
    url_prefix: String,
    username: String,
    password: String,
}

impl TryFrom<CredentialRepr> for Credential {
    type Error = CredentialError;

    fn try_from(r: CredentialRepr) -> Result<Self, Self::Error> {
        Credential::new(r.url_prefix, r.username, r.password)
    }
}

/// Normalized form of a prefix: scheme, host, port and path segments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Scope {
    scheme: String,
    host: String,
    port: Option<u16>,
    segments: Vec<String>,
}

impl Scope {
    fn of(url: &Url) -> Option<Self> {
        if !matches!(url.scheme(), "http" | "https") {
            return None;
        }
        Some(Scope {
            scheme: url.scheme().to_string(),
            host: url.host_str()?.to_ascii_lowercase(),
            port: url.port_or_known_default(),
            segments: url
                .path_segments()
                .map(|s| s.filter(|s| !s.is_empty()).map(str::to_string).collect())
                .unwrap_or_default(),
        })
    }

    fn covers(&self, other: &Scope) -> bool {
        self.scheme == other.scheme
            && self.host == other.host
            && self.port == other.port
            && other.segments.starts_with(&self.segments)
    }
}

impl Credential {
    pub fn new(
        url_prefix: impl Into<String>,
        username: impl Into<String>,
        password: impl Into<String>,
    ) -> Result<Self, CredentialError> {
        let url_prefix = url_prefix.into();
        let username = username.into();
        let scope = Url::parse(&url_prefix)
            .ok()
            .as_ref()
            .and_then(Scope::of)
            .ok_or_else(|| CredentialError::InvalidPrefix(url_prefix.clone()))?;
        if username.is_empty() {
            return Err(CredentialError::EmptyUsername);
        }
        Ok(Self {
            url_prefix,
            username,
            password: password.into(),
            scope,
        })
    }

    pub fn url_prefix(&self) -> &str {
        &self.url_prefix
    }

    pub fn username(&self) -> &str {
        &self.username
    }

    pub fn password(&self) -> &str {
        &self.password
    }

    /// True when `url` lies under this credential's prefix.
    pub fn matches(&self, url: &Url) -> bool {
        Scope::of(url).is_some_and(|s| self.scope.covers(&s))
    }
}

impl fmt::Debug for Credential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Credential")
            .field("url_prefix", &self.url_prefix)
            .field("username", &self.username)
            .field("password", &"<redacted>")
            .finish()
    }
}

/// Stored credentials; a lookup picks the longest matching prefix so one
/// entry can sign on to every feed beneath it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Credential>", into = "Vec<Credential>")]
pub struct CredentialStore {
    entries: Vec<Credential>,
}

impl TryFrom<Vec<Credential>> for CredentialStore {
    type Error = CredentialError;

    fn try_from(entries: Vec<Credential>) -> Result<Self, Self::Error> {
        let mut store = CredentialStore::default();
        for c in entries {
            store.insert(c)?;
        }
        Ok(store)
    }
}

impl From<CredentialStore> for Vec<Credential> {
    fn from(store: CredentialStore) -> Self {
        store.entries
    }
}

impl CredentialStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[Credential] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds a credential, refusing a prefix that is already present.
    pub fn insert(&mut self, credential: Credential) -> Result<(), CredentialError> {
        if self.entries.iter().any(|c| c.scope == credential.scope) {
            return Err(CredentialError::DuplicatePrefix(credential.url_prefix));
        }
        self.entries.push(credential);
        Ok(())
    }

    /// Adds a credential, replacing any entry with the same prefix.
    pub fn upsert(&mut self, credential: Credential) {
        match self.entries.iter_mut().find(|c| c.scope == credential.scope) {
            Some(slot) => *slot = credential,
            None => self.entries.push(credential),
        }
    }

    /// The credential whose prefix is the longest match for `url`.
    pub fn resolve(&self, url: &Url) -> Option<&Credential> {
        self.entries
            .iter()
            .filter(|c| c.matches(url))
            .max_by_key(|c| c.scope.segments.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn url(s: &str) -> Url {
        Url::parse(s).unwrap()
    }

    fn cred(prefix: &str, user: &str) -> Credential {
        Credential::new(prefix, user, "pw").unwrap()
    }

    #[test]
    fn single_prefix_matches_host() {
        let mut store = CredentialStore::new();
        store.insert(cred("https://cal.example.com", "alice")).unwrap();
        let found = store.resolve(&url("https://cal.example.com/u1/feed")).unwrap();
        assert_eq!(found.username(), "alice");
        assert!(store.resolve(&url("https://other.example.com/feed")).is_none());
    }

    #[test]
    fn longest_prefix_wins_in_any_order() {
        let short = cred("https://h.example", "short");
        let long = cred("https://h.example/a", "long");
        for entries in [vec![short.clone(), long.clone()], vec![long, short]] {
            let store = CredentialStore::try_from(entries).unwrap();
            assert_eq!(store.resolve(&url("https://h.example/a/b")).unwrap().username(), "long");
            assert_eq!(store.resolve(&url("https://h.example/b")).unwrap().username(), "short");
        }
    }

    #[test]
    fn prefixes_match_whole_segments() {
        let c = cred("https://h.example/a", "u");
        assert!(c.matches(&url("https://h.example/a")));
        assert!(c.matches(&url("https://h.example/a/")));
        assert!(!c.matches(&url("https://h.example/ab")));
    }

    #[test]
    fn scheme_and_port_must_agree() {
        let c = cred("https://h.example", "u");
        assert!(!c.matches(&url("http://h.example/x")));
        assert!(c.matches(&url("https://h.example:443/x")));
        assert!(!c.matches(&url("https://h.example:8443/x")));
        assert!(!c.matches(&url("https://evil.h.example/x")));
    }

    #[test]
    fn invalid_credentials_rejected() {
        assert!(matches!(
            Credential::new("ftp://h.example", "u", "p"),
            Err(CredentialError::InvalidPrefix(_))
        ));
        assert!(matches!(
            Credential::new("/relative", "u", "p"),
            Err(CredentialError::InvalidPrefix(_))
        ));
        assert_eq!(
            Credential::new("https://h.example", "", "p"),
            Err(CredentialError::EmptyUsername)
        );
    }

    #[test]
    fn duplicate_prefix_rejected_but_upsert_replaces() {
        let mut store = CredentialStore::new();
        store.insert(cred("https://h.example/a", "one")).unwrap();
        assert!(matches!(
            store.insert(cred("https://h.example/a/", "two")),
            Err(CredentialError::DuplicatePrefix(_))
        ));
        store.upsert(cred("https://h.example/a", "three"));
        assert_eq!(store.len(), 1);
        assert_eq!(store.entries()[0].username(), "three");
    }

    #[test]
    fn debug_output_redacts_password() {
        let c = Credential::new("https://h.example", "alice", "hunter2").unwrap();
        let shown = format!("{c:?}");
        assert!(!shown.contains("hunter2"));
        assert!(shown.contains("alice"));
    }

    #[test]
    fn serde_round_trip_validates() {
        let mut store = CredentialStore::new();
        store.insert(cred("https://h.example", "alice")).unwrap();
        let json = serde_json::to_string(&store).unwrap();
        let back: CredentialStore = serde_json::from_str(&json).unwrap();
        assert_eq!(back, store);
        let bad = r#"[{"url_prefix":"nope","username":"u","password":"p"}]"#;
        assert!(serde_json::from_str::<CredentialStore>(bad).is_err());
    }
}
