package app.security;

public class PermissionStore {
    private final StorageEngine storage;

    public PermissionStore(StorageEngine storage) {
        this.storage = storage;
    }

    public boolean holdsGrant(String principal, String resource, String verb) {
        String record = storage.readValue("grants", principal + ":" + resource);
        return record != null && record.contains(verb);
    }

    public boolean revoked(String principal) {
        return storage.readValue("revocations", principal) != null;
    }

    public void recordAudit(String principal) {
        storage.writeValue("audit", principal, "seen");
    }
}
