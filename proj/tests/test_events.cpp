#include "balksim/events.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace balksim {
namespace {

TEST(EventCatalog, DefaultFailureProbabilities) {
    const EventCatalog c = EventCatalog::default_catalog();
    ASSERT_EQ(c.entries.size(), 3u);
    EXPECT_EQ(c.entries[0].id, EventId::E1);
    EXPECT_DOUBLE_EQ(c.entries[0].fail_prob, 0.9);
    EXPECT_DOUBLE_EQ(c.entries[1].fail_prob, 0.4);
    EXPECT_DOUBLE_EQ(c.entries[2].fail_prob, 0.2);
    EXPECT_NO_THROW(c.validate());
}

TEST(EventCatalog, ValidateCatchesBadMix) {
    EventCatalog c = EventCatalog::default_catalog();
    c.mix = {0.5, 0.5, 0.5};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.mix = {0.5, 0.5};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.mix = {1.5, -0.5, 0.0};
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(EventCatalog, ValidateCatchesBadEntries) {
    EventCatalog c = EventCatalog::default_catalog();
    c.entries[0].fail_prob = 1.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);

    c = EventCatalog::default_catalog();
    c.entries[1].service_multiplier = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);

    c = EventCatalog::default_catalog();
    c.entries[2].id = EventId::E1;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(EventCatalog, SampleIndexFollowsMix) {
    EventCatalog c = EventCatalog::default_catalog();
    c.mix = {0.6, 0.3, 0.1};
    Rng rng(7);
    std::vector<int> counts(3, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        counts[c.sample_index(rng)] += 1;
    }
    EXPECT_NEAR(counts[0] / static_cast<double>(n), 0.6, 0.01);
    EXPECT_NEAR(counts[1] / static_cast<double>(n), 0.3, 0.01);
    EXPECT_NEAR(counts[2] / static_cast<double>(n), 0.1, 0.01);
}

TEST(EventCatalog, DegenerateMixAlwaysPicksTheCarrier) {
    EventCatalog c = EventCatalog::default_catalog();
    c.mix = {0.0, 1.0, 0.0};
    Rng rng(8);
    for (int i = 0; i < 1000; ++i) {
        ASSERT_EQ(c.sample_index(rng), 1u);
    }
}

TEST(EventId, StringRoundTrip) {
    EXPECT_EQ(event_id_from_string("E1"), EventId::E1);
    EXPECT_EQ(event_id_from_string("E3"), EventId::E3);
    EXPECT_STREQ(to_string(EventId::E2), "E2");
    EXPECT_THROW(event_id_from_string("E9"), std::invalid_argument);
}

TEST(EventCatalog, IndexOf) {
    const EventCatalog c = EventCatalog::default_catalog();
    EXPECT_EQ(c.index_of(EventId::E3), 2u);
}

}  // namespace
}  // namespace balksim
