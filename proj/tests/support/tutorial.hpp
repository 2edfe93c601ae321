#pragma once

// The two-branch walkthrough: a Python section on one branch, a Java section
// plus a hand edit on another, compared and merged.

#include "evograph/compare.hpp"
#include "evograph/provenance.hpp"
#include "evograph/workspace.hpp"

#include <filesystem>
#include <string>

namespace evograph::testing {

inline constexpr const char* kTutorialReadme = "# Greeter\n\nA tiny project that says hello in several languages.\n";
inline constexpr const char* kPythonPrompt = "add a section about Python to the README";
inline constexpr const char* kJavaPrompt = "add a section about Java to the README";
inline constexpr const char* kHandEdit = "Edited by hand.\n";

struct TutorialRun {
    CheckpointId origin;
    CheckpointId python_tip;
    CheckpointId java_tip;
    CheckpointId merge;
    CompareReport compare;
    std::string readme;
    ProvenanceMap provenance;
    std::string review;
    std::string session_text;
};

// Runs the walkthrough against the engine in `root` (README written first).
TutorialRun run_tutorial(const std::filesystem::path& root, AssistantGateway& gateway, EngineOptions options);

} // namespace evograph::testing
