"""
Test Runner
Quick checks that the dependencies and project modules load and work together

Usage:
    python test_system.py
"""

import sys


def check_imports():
    """Third-party dependencies can be imported"""
    print("Testing imports...")
    ok = True
    for name in ("numpy", "scipy", "pandas", "pydantic", "langgraph.graph"):
        try:
            __import__(name)
            print(f"  ✓ {name}")
        except ImportError as e:
            print(f"  ❌ {name}: {e}")
            ok = False
    return ok


def check_modules():
    """Every project module can be imported"""
    print("\nTesting project modules...")
    modules = [
        'config',
        'operator_core',
        'entropy_analysis',
        'observable_relation',
        'twin_observables',
        'state_io',
        'instance_generator',
        'selftest_app',
        'main',
    ]
    ok = True
    for module in modules:
        try:
            __import__(module)
            print(f"  ✓ {module}")
        except Exception as e:
            print(f"  ❌ {module}: {e}")
            ok = False
    return ok


def check_basic_functionality():
    """One end-to-end pass over the Bell state"""
    print("\nTesting basic functionality...")
    try:
        from entropy_analysis import LN2
        from instance_generator import bell_instance
        from twin_observables import TwinAnalyzer

        state, A1, A2, _ = bell_instance()
        analyzer = TwinAnalyzer(A1, A2, state)
        results = analyzer.analyze()
        discord = results['ledger'].discord
        if discord is None or abs(discord - LN2) > 1e-9:
            print(f"  ❌ Bell discord: unexpected value {discord}")
            return False
        print("  ✓ Bell discord = ln 2")
    except Exception as e:
        print(f"  ❌ TwinAnalyzer: {e}")
        return False

    try:
        from selftest_app import SelftestWorkflow
        SelftestWorkflow(verbose=False)
        print("  ✓ SelftestWorkflow instantiation")
    except Exception as e:
        print(f"  ❌ SelftestWorkflow: {e}")
        return False
    return True


def test_imports():
    assert check_imports(), "Missing third-party dependency"


def test_modules():
    assert check_modules(), "A project module failed to import"


def test_basic_functionality():
    assert check_basic_functionality(), "Bell end-to-end check failed"


def main():
    """Run all checks"""
    print("=" * 70)
    print("SYSTEM VERIFICATION TEST")
    print("=" * 70)

    checks = [
        ("Dependencies", check_imports),
        ("Project Modules", check_modules),
        ("Basic Functionality", check_basic_functionality),
    ]
    results = [(name, fn()) for name, fn in checks]

    print("\n" + "=" * 70)
    print("TEST SUMMARY")
    print("=" * 70)
    all_passed = True
    for name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"  {status} - {name}")
        all_passed = all_passed and result
    print("=" * 70)

    if all_passed:
        print("\n✅ All checks passed! Run the self-test with: python main.py selftest")
        return 0
    print("\n⚠️  Some checks failed. See README.md for installation instructions.")
    return 1


if __name__ == "__main__":
    exit_code = main()
    sys.exit(exit_code)
