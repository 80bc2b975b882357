#include <string>

#include <gtest/gtest.h>

#include "skillclf/nn/model_io.hpp"
#include "support/expect_error.hpp"

using namespace skillclf;
using namespace skillclf::nn;

namespace {

template <typename Scalar>
Mlp<Scalar> random_net(const std::string& arch, std::uint64_t seed) {
  auto net = init_network<Scalar>(parse_architecture(arch), seed);
  Rng rng(seed);
  for (auto& layer : net.layers) {
    for (Eigen::Index i = 0; i < layer.biases.size(); ++i) layer.biases(i) = static_cast<Scalar>(rng.normal());
  }
  return net;
}

}  // namespace

TEST(ModelIo, DoubleRoundTripIsBitExact) {
  const auto net = random_net<double>("12 : 7(elu) : 3(tanh) : 2(sigmoid)", 21);
  Hyperparams hp;
  hp.l2 = 1e-5;
  hp.optimizer = OptimizerKind::RmsProp;
  hp.seed = 0xFFFFFFFFFFFFFFFFull;
  const auto text = save_model(net, hp, {{"note", "x"}});
  const auto back = load_model<double>(text);
  EXPECT_EQ(back.net, net);
  EXPECT_EQ(back.hyperparams, hp);
  EXPECT_EQ(back.metadata.at("note"), "x");
  EXPECT_EQ(save_model(back.net, back.hyperparams, back.metadata), text);
}

TEST(ModelIo, FloatRoundTripIsBitExact) {
  const auto net = random_net<float>("768 : 81(lrelu) : 9(lrelu) : 1(sigmoid)", 5);
  const auto text = save_model(net, Hyperparams{});
  EXPECT_NE(text.find("\"768 : 81(lrelu) : 9(lrelu) : 1(sigmoid)\""), std::string::npos);
  const auto back = load_model<float>(text);
  EXPECT_EQ(back.net, net);
}

TEST(ModelIo, FileFields) {
  const auto net = random_net<double>("3 : 1(sigmoid)", 1);
  const auto doc = nlohmann::json::parse(save_model(net, Hyperparams{}));
  for (const char* key : {"architecture", "weights", "biases", "hyperparams", "metadata"}) EXPECT_TRUE(doc.contains(key));
  for (const char* key : {"n", "eta", "lambda", "optimizer", "batch_size", "seed"}) {
    EXPECT_TRUE(doc["hyperparams"].contains(key)) << key;
  }
  EXPECT_EQ(doc["weights"][0].size(), 1u);
  EXPECT_EQ(doc["weights"][0][0].size(), 3u);
}

TEST(ModelIo, TamperedWidth) {
  const auto net = random_net<double>("4 : 3(tanh) : 1(sigmoid)", 2);
  auto doc = nlohmann::json::parse(save_model(net, Hyperparams{}));
  doc["architecture"] = "4 : 2(tanh) : 1(sigmoid)";
  EXPECT_SKILLCLF_ERROR(load_model<double>(doc.dump()), ErrorCode::ArchitectureMismatch);
  doc = nlohmann::json::parse(save_model(net, Hyperparams{}));
  doc["weights"][0][1].erase(0);
  EXPECT_SKILLCLF_ERROR(load_model<double>(doc.dump()), ErrorCode::ArchitectureMismatch);
  doc = nlohmann::json::parse(save_model(net, Hyperparams{}));
  doc["biases"].erase(1);
  EXPECT_SKILLCLF_ERROR(load_model<double>(doc.dump()), ErrorCode::ArchitectureMismatch);
}

TEST(ModelIo, BadFormat) {
  EXPECT_SKILLCLF_ERROR(load_model<double>("{"), ErrorCode::BadFormat);
  EXPECT_SKILLCLF_ERROR(load_model<double>("{}"), ErrorCode::BadFormat);
  const auto net = random_net<double>("2 : 1(sigmoid)", 2);
  auto doc = nlohmann::json::parse(save_model(net, Hyperparams{}));
  doc["weights"][0][0][0] = "zero";
  EXPECT_SKILLCLF_ERROR(load_model<double>(doc.dump()), ErrorCode::BadFormat);
  doc = nlohmann::json::parse(save_model(net, Hyperparams{}));
  doc["hyperparams"]["optimizer"] = "sgd";
  EXPECT_SKILLCLF_ERROR(load_model<double>(doc.dump()), ErrorCode::BadFormat);
}
