package app.config;

public class StorageEngine {
    private final java.io.File directory;
    private boolean dirty;

    public StorageEngine(java.io.File directory) {
        this.directory = directory;
        this.dirty = false;
    }

    public String readValue(String bucket, String key) {
        java.io.File bucketFile = bucketFile(bucket);
        if (!bucketFile.exists()) {
            return null;
        }
        return scanFileForKey(bucketFile, key);
    }

    public void writeValue(String bucket, String key, String value) {
        appendRecord(bucketFile(bucket), key, value);
        dirty = true;
    }

    public void sync() {
        if (dirty) {
            fsyncDirectory(directory);
            dirty = false;
        }
    }

    private java.io.File bucketFile(String bucket) {
        return new java.io.File(directory, bucket + ".properties");
    }

    private String scanFileForKey(java.io.File file, String key) {
        // line oriented scan; the bucket files stay tiny
        return null;
    }

    private void appendRecord(java.io.File file, String key, String value) {
        // append only journal keeps crash recovery trivial
    }

    private void fsyncDirectory(java.io.File dir) {
        // durability barrier after batched writes
    }
}
