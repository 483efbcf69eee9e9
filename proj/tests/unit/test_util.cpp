#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "occlu/error.hpp"
#include "occlu/manifest.hpp"
#include "occlu/sha256.hpp"
#include "test_util.hpp"

using namespace occlu;

TEST_CASE("sha256 standard vectors") {
  CHECK(sha256_hex(std::string{}) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex(std::string{"abc"}) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex(std::string{
            "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"}) ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 streams a million a's across block boundaries") {
  Sha256 h;
  const std::string chunk(1000, 'a');
  for (int i = 0; i < 1000; ++i) h.update(chunk.data(), chunk.size());
  CHECK(h.hex_digest() ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");

  // odd-size updates must agree with the one-shot digest
  const std::string text = "the quick brown fox jumps over the lazy dog!?";
  Sha256 a;
  for (size_t i = 0; i < text.size(); i += 7) {
    a.update(text.data() + i, std::min<size_t>(7, text.size() - i));
  }
  CHECK(a.hex_digest() == sha256_hex(text));
}

TEST_CASE("sha256 file helpers") {
  testutil::TempDir tmp;
  testutil::write_text(tmp.file("a.bin"), "abc");
  testutil::write_text(tmp.file("b.bin"), "abc");
  testutil::write_text(tmp.file("c.bin"), "xyz");

  CHECK(sha256_file_hex(tmp.file("a.bin")) == sha256_hex(std::string{"abc"}));
  CHECK_THROWS_AS(sha256_file_hex(tmp.file("missing.bin")), IoError);

  const auto d_ab = sha256_files_hex({tmp.file("a.bin"), tmp.file("c.bin")});
  const auto d_ba = sha256_files_hex({tmp.file("c.bin"), tmp.file("a.bin")});
  CHECK(d_ab != d_ba);  // order matters

  // same content under a different basename changes the digest
  const auto d_a = sha256_files_hex({tmp.file("a.bin")});
  const auto d_b = sha256_files_hex({tmp.file("b.bin")});
  CHECK(d_a != d_b);

  // identical lists agree
  CHECK(sha256_files_hex({tmp.file("a.bin"), tmp.file("c.bin")}) == d_ab);
}

TEST_CASE("error hierarchy supports catch-by-base") {
  CHECK_THROWS_AS(throw FaceTooSmall("x"), InvalidInput);
  CHECK_THROWS_AS(throw FaceOutsideFrame("x"), InvalidInput);
  CHECK_THROWS_AS(throw InvalidInput("x"), Error);
  CHECK_THROWS_AS(throw IoError("x"), Error);
  CHECK_THROWS_AS(throw FormatError("x"), Error);
  CHECK_THROWS_AS(throw Error("x"), std::runtime_error);
}

TEST_CASE("manifest round trip") {
  testutil::TempDir tmp;
  std::vector<ManifestEntry> entries(2);
  entries[0].id = "s000_bonafide";
  entries[0].frames_dir = "s000_bonafide";
  entries[0].landmarks_path = "s000_bonafide/landmarks.jsonl";
  entries[0].label = "bonafide";
  entries[0].partition = "train";
  entries[0].subject = "s000";
  entries[1].id = "s000_print";
  entries[1].frames_dir = "s000_print";
  entries[1].landmarks_path = "s000_print/landmarks.jsonl";
  entries[1].label = "attack";
  entries[1].attack_kind = "print";
  entries[1].partition = "test";
  entries[1].subject = "s000";
  entries[1].fallback_frames = 3;

  const std::string path = tmp.file("manifest.jsonl");
  write_manifest(path, entries);
  const auto back = read_manifest(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == entries[0].id);
  CHECK(back[0].label == "bonafide");
  CHECK(back[0].attack_kind.empty());
  CHECK(back[0].partition == "train");
  CHECK(back[1].attack_kind == "print");
  CHECK(back[1].fallback_frames == 3);
}

TEST_CASE("manifest rejects malformed input with line numbers") {
  testutil::TempDir tmp;
  const std::string path = tmp.file("bad.jsonl");

  testutil::write_text(path, "{\"id\":\"a\"}\nnot json\n");
  CHECK_THROWS_WITH_AS(read_manifest(path),
                       doctest::Contains("line 1"), FormatError);

  testutil::write_text(
      path,
      "{\"id\":\"a\",\"frames_dir\":\"a\",\"landmarks_path\":\"a/l.jsonl\","
      "\"label\":\"spoof\",\"subject\":\"s0\"}\n");
  CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("label"),
                       FormatError);

  CHECK_THROWS_AS(read_manifest(tmp.file("missing.jsonl")), IoError);
}

TEST_CASE("frame listing is sorted and indexed") {
  testutil::TempDir tmp;
  // deliberately created out of order
  testutil::write_text(tmp.file("frame_0010.ppm"), "x");
  testutil::write_text(tmp.file("frame_0002.ppm"), "x");
  testutil::write_text(tmp.file("frame_0000.ppm"), "x");
  testutil::write_text(tmp.file("notes.txt"), "x");

  const auto frames = list_frames(tmp.str());
  REQUIRE(frames.size() == 3);
  CHECK(frame_index_from_name(frames[0]) == 0);
  CHECK(frame_index_from_name(frames[1]) == 2);
  CHECK(frame_index_from_name(frames[2]) == 10);
  CHECK(std::is_sorted(frames.begin(), frames.end()));
  CHECK(frame_index_from_name("whatever.ppm") == -1);
}

TEST_CASE("entry paths resolve against the manifest directory") {
  testutil::TempDir tmp;
  const std::string manifest = tmp.file("manifest.jsonl");
  const std::string resolved = resolve_path(manifest, "video/landmarks.jsonl");
  CHECK(resolved == tmp.file("video/landmarks.jsonl"));
  CHECK(resolve_path(manifest, "/abs/path.ppm") == "/abs/path.ppm");
}
