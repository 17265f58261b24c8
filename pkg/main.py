from cli import main

if __name__ == "__main__":
    # e.g. python main.py frame --spectrum lam.txt --lengths mu.txt --dim 3
    raise SystemExit(main())
