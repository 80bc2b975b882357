#include <regex>
#include <string>

#include <gtest/gtest.h>

#include "skillclf/random.hpp"
#include "skillclf/text.hpp"

using skillclf::scrub_text;
using skillclf::split_sentences;

TEST(ScrubText, RemovesUrl) { EXPECT_EQ(scrub_text("Visit https://example.com now"), "Visit now"); }

TEST(ScrubText, CleanTextIsFixedPoint) { EXPECT_EQ(scrub_text("clean text"), "clean text"); }

TEST(ScrubText, ReplacesSemicolonAndDropsBell) { EXPECT_EQ(scrub_text("a;b\u0007c"), "a,bc"); }

TEST(ScrubText, RemovesWwwTokensAndEmails) {
  EXPECT_EQ(scrub_text("see www.jobs.example.org or mail hr.team@example.co.uk today"), "see or mail today");
  EXPECT_EQ(scrub_text("Apply: HTTP://A.B/c?d=1;e"), "Apply:");
}

TEST(ScrubText, KeepsAtSignsThatAreNotAddresses) {
  EXPECT_EQ(scrub_text("meet @ noon"), "meet @ noon");
  EXPECT_EQ(scrub_text("user@localhost"), "user@localhost");
}

TEST(ScrubText, CollapsesUnicodeWhitespace) {
  EXPECT_EQ(scrub_text("  a\t\tb\xC2\xA0\xE2\x80\x83" "c \n"), "a b c");
}

TEST(ScrubText, PreservesDiacriticsAndDropsFormatCharacters) {
  EXPECT_EQ(scrub_text("fran\xC3\xA7" "ais\xE2\x80\x8B native"), "fran\xC3\xA7" "ais native");
  EXPECT_EQ(scrub_text("Gr\xC3\xBC\xC3\x9F" "e"), "Gr\xC3\xBC\xC3\x9F" "e");
}

TEST(ScrubText, DropsInvalidUtf8) {
  EXPECT_EQ(scrub_text("a\xFF" "b\xC3"), "ab");
  EXPECT_EQ(scrub_text("\xE2\x82"), "");
}

TEST(ScrubText, EmptyInput) { EXPECT_EQ(scrub_text(""), ""); }

TEST(ScrubText, AddressRevealedByRemovalIsAlsoRemoved) {
  const auto once = scrub_text("x@http://q y.com");
  EXPECT_EQ(scrub_text(once), once);
}

namespace {

std::string random_text(skillclf::Rng& rng) {
  static const std::string pieces[] = {
      "a",   "Z",  " ",   "\t", "\n", ";",     ".",    "@",    ":",   "/",   "//", "://", "www.", "http",
      "b.c", "-",  "_",   "\x01", "\x7F", "\xC3\xA9", "\xE2\x80\x8B", "\xC2\xA0", "\xFF", "x.y", "@q.r", "1",
      "%",   "+",  "WWW", "https://", "e@f", "mail@", ".org"};
  std::string out;
  const auto len = rng.below(24);
  for (std::uint64_t i = 0; i < len; ++i) out += pieces[rng.below(std::size(pieces))];
  return out;
}

}  // namespace

TEST(ScrubText, IdempotentAndCleanOnRandomInputs) {
  skillclf::Rng rng(2024);
  const std::regex url(R"([A-Za-z][A-Za-z0-9+.\-]*://|(^|[^A-Za-z0-9])[wW]{3}\.)");
  const std::regex email(R"([A-Za-z0-9._%+\-]+@[A-Za-z0-9\-]+(\.[A-Za-z0-9\-]+)*\.[A-Za-z0-9]+)");
  for (int i = 0; i < 5000; ++i) {
    const auto raw = random_text(rng);
    const auto once = scrub_text(raw);
    ASSERT_EQ(scrub_text(once), once) << "raw: " << raw;
    ASSERT_EQ(once.find(';'), std::string::npos);
    for (unsigned char c : once) ASSERT_FALSE(c < 0x20 || c == 0x7F) << "raw: " << raw;
    ASSERT_FALSE(std::regex_search(once, url)) << "raw: " << raw << " scrubbed: " << once;
    ASSERT_FALSE(std::regex_search(once, email)) << "raw: " << raw << " scrubbed: " << once;
    if (!once.empty()) {
      ASSERT_NE(once.front(), ' ');
      ASSERT_NE(once.back(), ' ');
      ASSERT_EQ(once.find("  "), std::string::npos);
    }
  }
}

TEST(SplitSentences, TwoSentences) {
  EXPECT_EQ(split_sentences("Required skills. Good communication."),
            (std::vector<std::string>{"Required skills", "Good communication"}));
}

TEST(SplitSentences, EmptyInput) { EXPECT_TRUE(split_sentences("").empty()); }

TEST(SplitSentences, NoTerminator) {
  EXPECT_EQ(split_sentences("no terminator here"), (std::vector<std::string>{"no terminator here"}));
}

TEST(SplitSentences, NewlinesAndTerminatorRuns) {
  EXPECT_EQ(split_sentences("Really?! Yes\nsecond line... third"),
            (std::vector<std::string>{"Really", "Yes", "second line", "third"}));
}

TEST(SplitSentences, InnerPeriodsDoNotSplit) {
  EXPECT_EQ(split_sentences("Version 2.5 of e.g.the tool. Done"),
            (std::vector<std::string>{"Version 2.5 of e.g.the tool", "Done"}));
}

TEST(SplitSentences, EmptyFragmentsDropped) {
  EXPECT_EQ(split_sentences(". ! \n\n ?"), std::vector<std::string>{});
}
