#include "balksim/rewards.hpp"

#include <gtest/gtest.h>

namespace balksim {
namespace {

LearningParams paper_params() {
    LearningParams p;
    p.mu_bar = 3.7037;
    p.lambda_bar = 0.25;
    return p;
}

TEST(RewardJoin, FrozenExamples) {
    const LearningParams p = paper_params();
    EXPECT_NEAR(reward_join(0, p, 3.7037), -2.7037, 1e-6);
    EXPECT_NEAR(reward_join(2, p, 3.7037), -10.1111, 1e-4);
    EXPECT_NEAR(reward_join(0, p, 0.0), 1.0, 1e-9);
}

TEST(RewardJoin, RejectsBadInputs) {
    const LearningParams p = paper_params();
    EXPECT_THROW(reward_join(-1, p, 1.0), std::invalid_argument);
    EXPECT_THROW(reward_join(0, p, -1.0), std::invalid_argument);
}

TEST(RewardBalk, FrozenExamples) {
    const LearningParams p = paper_params();
    EXPECT_NEAR(reward_balk(BalkOutcome::Autonomy, 0, p), 0.3, 1e-9);
    EXPECT_NEAR(reward_balk(BalkOutcome::Autonomy, 7, p), 0.3, 1e-9);
    EXPECT_NEAR(reward_balk(BalkOutcome::Failed, 0, p), -29.6296, 1e-4);
    EXPECT_NEAR(reward_balk(BalkOutcome::Failed, 5, p), -24.6296, 1e-4);
}

TEST(RewardBalk, RejectsNegativeQueue) {
    const LearningParams p = paper_params();
    EXPECT_THROW(reward_balk(BalkOutcome::Failed, -1, p), std::invalid_argument);
}

TEST(LearningParams, RefreshRatesTimeConvention) {
    LearningParams p;
    p.convention = MuBarConvention::Time;
    p.refresh_rates(0.25, 0.27);
    EXPECT_NEAR(p.mu_bar, 1.0 / 0.27, 1e-12);
    EXPECT_DOUBLE_EQ(p.lambda_bar, 0.25);
}

TEST(LearningParams, RefreshRatesRateConvention) {
    LearningParams p;
    p.convention = MuBarConvention::Rate;
    p.refresh_rates(0.25, 0.27);
    EXPECT_DOUBLE_EQ(p.mu_bar, 0.27);
    EXPECT_DOUBLE_EQ(p.lambda_bar, 0.25);
}

TEST(LearningParams, RefreshRejectsNonPositiveRates) {
    LearningParams p;
    EXPECT_THROW(p.refresh_rates(0.0, 0.27), std::invalid_argument);
    EXPECT_THROW(p.refresh_rates(0.25, -1.0), std::invalid_argument);
}

TEST(LearningParams, ValidateNamesBounds) {
    LearningParams p;
    EXPECT_NO_THROW(p.validate());

    p.alpha = 1.5;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.alpha = 0.0;  // zero learning rate is a legal no-op configuration
    EXPECT_NO_THROW(p.validate());

    p = LearningParams{};
    p.gamma = 1.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);

    p = LearningParams{};
    p.epsilon = -0.1;
    EXPECT_THROW(p.validate(), std::invalid_argument);

    p = LearningParams{};
    p.mu_bar = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);

    p = LearningParams{};
    p.lambda_bar = -2.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(LearningParams, PaperDefaults) {
    const LearningParams p;
    EXPECT_DOUBLE_EQ(p.alpha, 0.1);
    EXPECT_DOUBLE_EQ(p.gamma, 0.9);
    EXPECT_DOUBLE_EQ(p.epsilon, 0.1);
    EXPECT_DOUBLE_EQ(p.r_s, 1.0);
    EXPECT_DOUBLE_EQ(p.r_f, -2.0);
    EXPECT_DOUBLE_EQ(p.r_t, 0.3);
    EXPECT_EQ(p.convention, MuBarConvention::Time);
}

}  // namespace
}  // namespace balksim
