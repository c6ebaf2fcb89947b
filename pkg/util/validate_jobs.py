import sys, json
from pydantic import ValidationError

from util.jobs_loader import load_jobs

if __name__ == "__main__":
  dir_ = sys.argv[1] if len(sys.argv) > 1 else "corpus"
  try:
    jobs = load_jobs(dir_)
  except (ValidationError, json.JSONDecodeError, ValueError) as e:
    print(json.dumps({"ok": False, "erro": str(e)}, ensure_ascii=False, indent=2))
    sys.exit(1)
  by_command = {}
  for _, job in jobs:
    by_command[job.command] = by_command.get(job.command, 0) + 1
  print(json.dumps({"ok": True, "count": len(jobs), "by_command": by_command}, ensure_ascii=False, indent=2))
