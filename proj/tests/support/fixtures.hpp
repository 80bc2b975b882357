#pragma once

// Reference material transcribed from the original study: the annotated
// corpus sample, the evaluated network configurations, and the reported
// accuracy tables.

#include <array>
#include <string_view>

namespace skillclf::fixtures {

inline constexpr std::string_view kSampleThreeLines =
    "1-2: 4; Knowledge of the English language at a professional level is required; T1.1, T1.3\n"
    "1-3: 1; Task description; 0\n"
    "1-3: 2; Support carrying out social scientific research on social and economic aspects of environmental "
    "issues; 0\n";

inline constexpr std::string_view kSampleCorpus =
    "1-2: 4; Knowledge of the English language at a professional level is required; T1.1, T1.3\n"
    "1-3: 1; Task description; 0\n"
    "1-3: 2; Support carrying out social scientific research on social and economic aspects of environmental "
    "issues; 0\n"
    "1-3: 3; Contribute to preparation of scientific outputs such as reports conference papers and journal "
    "articles; 0\n"
    "1-3: 4; Manage and coordinate research work in an international context; 0\n"
    "1-3: 5; Support conducting a questionnaire survey in French and in English; 0\n"
    "1-3: 6; Translate scientific documents from English into French; 0\n"
    "1-3: 7; Required education and experience; 0\n"
    "1-3: 8; PhD degree in social sciences and humanities; 0\n"
    "1-3: 9; 5 years of experience in management of scientific research preferably on an environment-related "
    "topic; 0\n"
    "1-3: 10; at least ten scientific outputs such as reports conference papers journal articles books and book "
    "chapters; 0\n"
    "1-3: 11; Required skills; 0\n"
    "1-3: 12; Ability to manage multiple projects at the same time and to deliver them on tight Schedule; T2.3, "
    "T3.1, T3.2, T4.4\n"
    "1-3: 13; Capacity to write and edit scientific reports and publications; T2.4, T3.1, T3.4, T4.5, T6.4, T6.6\n"
    "1-3: 14; good communication skills suitable for teamwork in an international collaborative environment; "
    "T4.1, T4.2, T4.3, T4.4\n"
    "1-3: 15; Written and oral skills as a native French speaker (preferred) and written and oral skills in "
    "English for advanced scientific communication; T1.1\n"
    "1-3: 16; a very good understanding of the Canadian political and cultural context; T6.4\n"
    "1-4: 1; practice in the laboratory; 0\n"
    "1-4: 2; knowledge of the English language; T1.1\n"
    "1-4: 3; advanced knowledge of working with a PC; T1.3\n";

/// Level-1 configurations (English embeddings), level-1 configurations
/// (multi-language embeddings), and level-2 configurations.
inline constexpr std::array<std::string_view, 10> kLevel1EnglishArchitectures{
    "768 : 128(elu) : 1(sigmoid)",
    "768 : 1536(tanh) : 512(tanh) : 128(tanh) : 32(tanh) : 8(tanh) : 1(sigmoid)",
    "768 : 20(lrelu) : 4(lrelu) : 1(sigmoid)",
    "768 : 81(lrelu) : 9(lrelu) : 1(sigmoid)",
    "768 : 81(sigmoid) : 9(sigmoid) : 1(sigmoid)",
    "768 : 81(tanh) : 9(tanh) : 1(sigmoid)",
    "768 : 81(lrelu) : 9(lrelu) : 1(sigmoid)",
    "768 : 81(lrelu) : 9(lrelu) : 1(sigmoid)",
    "768 : 81(lrelu) : 9(lrelu) : 1(sigmoid)",
    "768 : 81(lrelu) : 9(lrelu) : 1(sigmoid)",
};

inline constexpr std::array<std::string_view, 7> kLevel1MultiArchitectures{
    "768 : 128(elu) : 1(sigmoid)",
    "768 : 128(elu) : 1(sigmoid)",
    "768 : 128(elu) : 1(sigmoid)",
    "768 : 128(elu) : 1(sigmoid)",
    "768 : 128(lrelu) : 1(sigmoid)",
    "768 : 81(lrelu) : 9(lrelu) : 1(sigmoid)",
    "768 : 81(lrelu) : 9(lrelu) : 1(sigmoid)",
};

inline constexpr std::array<std::string_view, 10> kLevel2Architectures{
    "768 : 128(lrelu) : no(sigmoid)",
    "768 : 128(lrelu) : no(sigmoid)",
    "768 : 150(lrelu) : 30(lrelu) : no(sigmoid)",
    "768 : 128(lrelu) : no(sigmoid)",
    "768 : 128(lrelu) : no(sigmoid)",
    "768 : 128(tanh) : no(sigmoid)",
    "768 : 128(lrelu) : no(sigmoid)",
    "768 : 128(elu) : no(sigmoid)",
    "768 : 128(elu) : no(sigmoid)",
    "768 : 150(sigmoid) : 30(sigmoid) : no(sigmoid)",
};

/// Level-1 accuracies (percent), rows = trials, columns = T1..T6.
inline constexpr std::array<std::array<double, 6>, 10> kLevel1EnglishAccuracy{{
    {96.91, 95.16, 92.70, 93.68, 99.33, 96.14},
    {95.93, 93.55, 91.74, 93.26, 98.52, 95.14},
    {97.20, 94.87, 93.03, 94.18, 99.37, 96.76},
    {97.50, 95.85, 93.59, 94.60, 99.52, 97.25},
    {97.10, 94.68, 91.99, 93.76, 99.17, 95.62},
    {96.91, 94.68, 92.34, 93.28, 99.29, 95.80},
    {97.45, 95.91, 93.59, 94.78, 99.54, 97.33},
    {97.48, 96.04, 93.74, 94.84, 99.50, 97.14},
    {97.48, 96.24, 94.07, 94.43, 99.58, 97.43},
    {95.35, 90.00, 89.55, 89.19, 97.81, 91.03},
}};

inline constexpr std::array<std::array<double, 6>, 7> kLevel1MultiAccuracy{{
    {97.14, 94.71, 92.92, 93.26, 98.93, 96.01},
    {97.54, 89.11, 93.66, 94.08, 99.03, 96.95},
    {97.79, 95.61, 93.80, 94.69, 99.20, 96.70},
    {97.56, 95.86, 93.97, 94.67, 99.04, 96.97},
    {97.82, 96.01, 93.89, 94.83, 99.27, 97.23},
    {98.02, 95.82, 94.12, 94.90, 99.24, 97.08},
    {97.98, 95.97, 94.04, 94.56, 99.39, 97.02},
}};

/// Level-2 accuracies (percent), rows = trials 1..10, columns = T1..T6.
inline constexpr std::array<std::array<double, 6>, 10> kLevel2Accuracy{{
    {91.46, 66.93, 72.23, 74.49, 76.20, 81.55},
    {92.95, 67.69, 73.09, 76.05, 77.47, 82.51},
    {88.81, 65.41, 69.83, 72.91, 73.91, 78.61},
    {95.89, 68.17, 73.05, 75.23, 75.67, 84.82},
    {92.82, 65.47, 69.61, 73.34, 77.13, 81.07},
    {96.22, 67.53, 72.44, 76.05, 80.05, 84.32},
    {93.19, 65.63, 70.40, 73.34, 77.68, 81.92},
    {91.71, 65.09, 69.34, 72.67, 76.87, 81.03},
    {95.02, 66.98, 71.46, 74.72, 78.79, 83.02},
    {96.35, 67.85, 72.16, 76.21, 76.75, 83.10},
}};

}  // namespace skillclf::fixtures
